#pragma once

// Brute-force reference implementations, kept deliberately independent of the
// production algorithms so the two can disagree.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "citorder/coupling.hpp"
#include "citorder/eord.hpp"
#include "citorder/orders.hpp"
#include "citorder/probability.hpp"

namespace oracle {

using namespace citorder;

// Complement product over every matching call statement of the source class.
inline double operation_probability(const Analyzer& analyzer,
                                    const CallOperation& op) {
    const ClassDecl* cls = analyzer.model().find_class(op.source_class);
    double miss = 1.0;
    for (const auto& m : cls->methods) {
        for (const auto& s : analyzer.method_statements(cls->name, m.name)) {
            if (s.kind != StmtKind::call) continue;
            if (s.call->target_class != op.target_class) continue;
            if (s.call->target_member != op.target_member) continue;
            if (s.call->member_kind != op.member_kind) continue;
            miss *= 1.0 - s.probability;
        }
    }
    return 1.0 - miss;
}

// Chain enumeration by plain recursion over per-method distinct call targets.
inline std::vector<TransitiveChain> chains(const Analyzer& analyzer, int max_len) {
    const ProgramModel& model = analyzer.model();
    std::map<MemberNode, std::set<MemberNode>> out;
    for (const auto& cls : model.classes) {
        for (const auto& m : cls.methods) {
            MemberNode from{cls.name, m.name, MemberKind::method};
            for (const auto& s : analyzer.method_statements(cls.name, m.name))
                if (s.kind == StmtKind::call)
                    out[from].insert({s.call->target_class, s.call->target_member,
                                      s.call->member_kind});
        }
    }

    auto valid = [&](const std::vector<MemberNode>& path) {
        if (path.size() < 3) return false;
        if (path.front().cls == path.back().cls) return false;
        std::set<MemberNode> seen(path.begin(), path.end());
        if (seen.size() != path.size()) return false;
        for (std::size_t i = 0; i + 2 < path.size(); ++i)
            if (path[i].cls == path[i + 1].cls && path[i + 1].cls == path[i + 2].cls)
                return false;
        return true;
    };

    std::vector<TransitiveChain> result;
    std::vector<MemberNode> path;
    auto emit = [&] {
        TransitiveChain chain;
        chain.path = path;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            CallOperation op{path[i].cls, path[i + 1].cls, path[i + 1].member,
                             path[i + 1].kind};
            chain.ops.push_back(op);
            chain.pcs.push_back(operation_probability(analyzer, op));
        }
        chain.probability = 1.0;
        for (double pc : chain.pcs) chain.probability *= pc;
        result.push_back(std::move(chain));
    };
    auto walk = [&](auto&& self, const MemberNode& node) -> void {
        path.push_back(node);
        if (valid(path)) emit();
        if (static_cast<int>(path.size()) < max_len && node.kind == MemberKind::method) {
            auto it = out.find(node);
            if (it != out.end())
                for (const auto& next : it->second) self(self, next);
        }
        path.pop_back();
    };
    for (const auto& cls : model.classes)
        for (const auto& m : cls.methods)
            walk(walk, MemberNode{cls.name, m.name, MemberKind::method});

    std::sort(result.begin(), result.end(),
              [](const TransitiveChain& a, const TransitiveChain& b) {
                  return a.path < b.path;
              });
    return result;
}

// Path condition as the intersection over every simple entry-to-block path.
inline std::vector<PathConstraint> simple_path_condition(const Cfg& cfg,
                                                         int target) {
    auto edge_constraint = [](const Cfg& g, const CfgEdge& e)
        -> std::optional<PathConstraint> {
        switch (e.kind) {
            case EdgeKind::branch_true:
                return PathConstraint{e.from, Outcome::then_branch, -1};
            case EdgeKind::branch_false:
                return PathConstraint{e.from, Outcome::else_branch, -1};
            case EdgeKind::case_arm:
                return PathConstraint{e.from, Outcome::case_arm, e.arm};
            case EdgeKind::loop_body:
                return PathConstraint{e.from, Outcome::loop_body, -1};
            default:
                (void)g;
                return std::nullopt;
        }
    };

    std::optional<std::set<PathConstraint>> meet;
    std::vector<bool> on_path(cfg.blocks.size(), false);
    std::set<PathConstraint> current;
    auto dfs = [&](auto&& self, int block) -> void {
        if (block == target) {
            if (!meet) {
                meet = current;
            } else {
                std::set<PathConstraint> kept;
                std::set_intersection(meet->begin(), meet->end(), current.begin(),
                                      current.end(),
                                      std::inserter(kept, kept.begin()));
                *meet = std::move(kept);
            }
            return;
        }
        on_path[block] = true;
        for (const auto& e : cfg.edges) {
            if (e.from != block || on_path[e.to]) continue;
            auto c = edge_constraint(cfg, e);
            const bool added = c && current.insert(*c).second;
            self(self, e.to);
            if (added) current.erase(*c);
        }
        on_path[block] = false;
    };
    dfs(dfs, cfg.entry);

    std::vector<PathConstraint> result(meet->begin(), meet->end());
    std::sort(result.begin(), result.end(),
              [](const PathConstraint& a, const PathConstraint& b) {
                  return a.block < b.block;
              });
    return result;
}

// Order cost recomputed from the raw model plus a chain list.
inline OrderCost order_cost(const ProgramModel& model,
                            const std::vector<TransitiveChain>& chains,
                            const std::vector<std::string>& order,
                            const Weights& w) {
    struct Pair {
        std::set<std::string> attrs, methods;
        double t = 0.0;
        bool direct = false;
        bool transitive = false;
    };
    std::map<std::pair<std::string, std::string>, Pair> pairs;

    for (const auto& cls : model.classes) {
        if (cls.extends) {
            auto& p = pairs[{cls.name, *cls.extends}];
            p.direct = true;
        }
        for (const auto& a : cls.attributes)
            if (!is_scalar_type(a.type) && a.type != cls.name)
                pairs[{cls.name, a.type}].direct = true;
        for (const auto& m : cls.methods)
            for (const auto& b : m.cfg.blocks)
                for (const auto& s : b.statements) {
                    if (s.kind != StmtKind::call) continue;
                    if (s.call->target_class == cls.name) continue;
                    auto& p = pairs[{cls.name, s.call->target_class}];
                    p.direct = true;
                    if (s.call->member_kind == MemberKind::attribute)
                        p.attrs.insert(s.call->target_member);
                    else
                        p.methods.insert(s.call->target_member);
                }
    }
    std::map<std::pair<std::string, std::string>, double> miss;
    for (const auto& chain : chains) {
        auto key = std::make_pair(chain.source_class(), chain.target_class());
        if (!miss.count(key)) miss[key] = 1.0;
        miss[key] *= 1.0 - chain.probability;
    }
    for (const auto& [key, m] : miss) {
        auto& p = pairs[key];
        p.transitive = true;
        p.t = 1.0 - m;
    }

    double max_a = 0.0, max_m = 0.0;
    for (const auto& [key, p] : pairs) {
        max_a = std::max(max_a, static_cast<double>(p.attrs.size()));
        max_m = std::max(max_m, static_cast<double>(p.methods.size()));
    }

    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;

    OrderCost cost;
    for (const auto& [key, p] : pairs) {
        if (!p.direct && !p.transitive) continue;
        if (pos.at(key.first) >= pos.at(key.second)) continue;
        const double an = max_a == 0.0 ? 0.0 : p.attrs.size() / max_a;
        const double mn = max_m == 0.0 ? 0.0 : p.methods.size() / max_m;
        cost.ocplx += std::sqrt(w.wa * an * an + w.wm * mn * mn + w.wt * p.t * p.t);
        cost.acplx += static_cast<double>(p.attrs.size());
        cost.mcplx += static_cast<double>(p.methods.size());
        cost.tcplx += p.t;
        cost.stubs += 1;
    }
    return cost;
}

inline double min_ocplx(const Eord& eord, const Weights& w) {
    std::vector<std::string> perm = eord.nodes;
    std::sort(perm.begin(), perm.end());
    double best = std::numeric_limits<double>::infinity();
    do {
        best = std::min(best, ocplx(eord, perm, w).ocplx);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// Elementary cycles by DFS from each minimal vertex, visiting only vertices
// at or above the anchor.
inline std::vector<std::vector<std::string>> elementary_cycles(
    const std::vector<std::string>& nodes,
    const std::set<std::pair<std::string, std::string>>& edges) {
    std::vector<std::string> sorted = nodes;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::vector<std::string>> cycles;
    std::vector<std::string> path;
    std::set<std::string> on_path;
    auto dfs = [&](auto&& self, const std::string& anchor,
                   const std::string& node) -> void {
        path.push_back(node);
        on_path.insert(node);
        for (const auto& next : sorted) {
            if (next < anchor || !edges.count({node, next})) continue;
            if (next == anchor)
                cycles.push_back(path);
            else if (!on_path.count(next))
                self(self, anchor, next);
        }
        on_path.erase(node);
        path.pop_back();
    };
    for (const auto& anchor : sorted) dfs(dfs, anchor, anchor);
    std::sort(cycles.begin(), cycles.end());
    return cycles;
}

// Exact Wilcoxon p by enumerating every sign assignment.
inline double wilcoxon_exact_p(const std::vector<double>& diffs) {
    std::vector<double> d;
    for (double x : diffs)
        if (x != 0.0) d.push_back(x);
    const int n = static_cast<int>(d.size());
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return std::abs(d[a]) < std::abs(d[b]); });
    std::vector<long long> doubled(n);  // twice the average rank, an integer
    for (int i = 0; i < n;) {
        int j = i;
        while (j < n && std::abs(d[idx[j]]) == std::abs(d[idx[i]])) ++j;
        const long long twice = i + 1 + j;  // 2 * (i + 1 + j) / 2
        for (int k = i; k < j; ++k) doubled[idx[k]] = twice;
        i = j;
    }
    long long observed = 0;
    for (int i = 0; i < n; ++i)
        if (d[i] > 0) observed += doubled[i];
    std::uint64_t le = 0, ge = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        long long w = 0;
        for (int i = 0; i < n; ++i)
            if (mask & (std::uint64_t{1} << i)) w += doubled[i];
        if (w <= observed) ++le;
        if (w >= observed) ++ge;
    }
    const double denom = std::ldexp(1.0, n);
    return std::min(1.0, 2.0 * std::min(le / denom, ge / denom));
}

}  // namespace oracle

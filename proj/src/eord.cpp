#include "citorder/eord.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "citorder/coupling.hpp"
#include "citorder/error.hpp"

namespace citorder {

std::string to_string(EdgeLabel label) {
    switch (label) {
        case EdgeLabel::D: return "D";
        case EdgeLabel::T: return "T";
        case EdgeLabel::C: return "C";
    }
    return "?";
}

std::string to_string(DirectKind kind) {
    switch (kind) {
        case DirectKind::inheritance: return "inheritance";
        case DirectKind::aggregation: return "aggregation";
        case DirectKind::association: return "association";
    }
    return "?";
}

const EordEdge* Eord::edge(const std::string& from, const std::string& to) const {
    for (const auto& e : edges)
        if (e.from == from && e.to == to) return &e;
    return nullptr;
}

Eord build_ord(const ProgramModel& model) {
    Eord g;
    g.name = model.name;
    for (const auto& cls : model.classes) g.nodes.push_back(cls.name);

    std::map<std::pair<std::string, std::string>, std::set<DirectKind>> kinds;
    for (const auto& cls : model.classes) {
        if (cls.extends)
            kinds[{cls.name, *cls.extends}].insert(DirectKind::inheritance);
        for (const auto& a : cls.attributes)
            if (!is_scalar_type(a.type) && a.type != cls.name)
                kinds[{cls.name, a.type}].insert(DirectKind::aggregation);
        for (const auto& m : cls.methods)
            for (const auto& b : m.cfg.blocks)
                for (const auto& s : b.statements)
                    if (s.kind == StmtKind::call && s.call->target_class != cls.name)
                        kinds[{cls.name, s.call->target_class}].insert(
                            DirectKind::association);
    }
    for (auto& [pair, ks] : kinds) {
        EordEdge e;
        e.from = pair.first;
        e.to = pair.second;
        e.label = EdgeLabel::D;
        e.direct_kinds = std::move(ks);
        g.edges.push_back(std::move(e));
    }
    return g;
}

namespace {

struct ChainWalker {
    const Analyzer& analyzer;
    int max_len;
    std::map<MemberNode, std::vector<MemberNode>> adjacency;
    std::vector<MemberNode> path;
    std::vector<TransitiveChain>* out;

    void emit() {
        TransitiveChain chain;
        chain.path = path;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            CallOperation op{path[i].cls, path[i + 1].cls, path[i + 1].member,
                             path[i + 1].kind};
            const double pc = analyzer.operation_probability(op);
            chain.probability *= pc;
            chain.ops.push_back(std::move(op));
            chain.pcs.push_back(pc);
        }
        out->push_back(std::move(chain));
    }

    void extend() {
        const MemberNode& last = path.back();
        if (last.kind != MemberKind::method) return;
        auto it = adjacency.find(last);
        if (it == adjacency.end()) return;
        for (const MemberNode& next : it->second) {
            bool revisits = false;
            for (const auto& n : path)
                if (n.cls == next.cls && n.member == next.member) revisits = true;
            if (revisits) continue;
            if (path.size() >= 2 && path[path.size() - 2].cls == last.cls &&
                last.cls == next.cls)
                continue;
            path.push_back(next);
            if (path.size() >= 3 && path.front().cls != path.back().cls) emit();
            if (static_cast<int>(path.size()) < max_len) extend();
            path.pop_back();
        }
    }
};

}  // namespace

std::vector<TransitiveChain> enumerate_chains(const Analyzer& analyzer, int max_len) {
    if (max_len < 3 || max_len > 5)
        throw InputError("chain length must be 3, 4, or 5");
    const ProgramModel& model = analyzer.model();

    ChainWalker walker{analyzer, max_len, {}, {}, nullptr};
    for (const auto& cls : model.classes) {
        for (const auto& m : cls.methods) {
            std::set<MemberNode> targets;
            for (const auto& s : analyzer.method_statements(cls.name, m.name))
                if (s.kind == StmtKind::call)
                    targets.insert(MemberNode{s.call->target_class,
                                              s.call->target_member,
                                              s.call->member_kind});
            if (!targets.empty())
                walker.adjacency[MemberNode{cls.name, m.name, MemberKind::method}] =
                    std::vector<MemberNode>(targets.begin(), targets.end());
        }
    }

    std::vector<TransitiveChain> chains;
    walker.out = &chains;
    for (const auto& cls : model.classes) {
        for (const auto& m : cls.methods) {
            walker.path = {MemberNode{cls.name, m.name, MemberKind::method}};
            walker.extend();
        }
    }
    return chains;
}

double control_complexity(const std::vector<double>& chain_probabilities) {
    double q = 1.0;
    for (double t : chain_probabilities) q *= 1.0 - t;
    return 1.0 - q;
}

Eord build_eord(const ProgramModel& model, const Analyzer& analyzer,
                const EordOptions& options) {
    validate_weights(options.weights);
    Eord g = build_ord(model);
    g.max_chain_len = options.max_chain_len;

    if (options.transitive) {
        g.chains = enumerate_chains(analyzer, options.max_chain_len);
        std::map<std::pair<std::string, std::string>, std::vector<double>> per_pair;
        for (const auto& chain : g.chains)
            per_pair[{chain.source_class(), chain.target_class()}].push_back(
                chain.probability);
        for (const auto& [pair, ts] : per_pair) {
            EordEdge* found = nullptr;
            for (auto& e : g.edges)
                if (e.from == pair.first && e.to == pair.second) found = &e;
            if (!found) {
                EordEdge e;
                e.from = pair.first;
                e.to = pair.second;
                e.label = EdgeLabel::T;
                found = &g.edges.emplace_back(std::move(e));
            } else {
                found->label = EdgeLabel::C;
            }
            found->coupling.t = control_complexity(ts);
        }
        std::sort(g.edges.begin(), g.edges.end(),
                  [](const EordEdge& a, const EordEdge& b) {
                      return std::tie(a.from, a.to) < std::tie(b.from, b.to);
                  });
    }

    const auto data = measure_data_coupling(model);
    int max_a = 0;
    int max_m = 0;
    for (const auto& [pair, dc] : data) {
        max_a = std::max(max_a, static_cast<int>(dc.attrs.size()));
        max_m = std::max(max_m, static_cast<int>(dc.methods.size()));
    }
    for (auto& e : g.edges) {
        if (auto it = data.find({e.from, e.to}); it != data.end()) {
            e.coupling.attrs = static_cast<int>(it->second.attrs.size());
            e.coupling.methods = static_cast<int>(it->second.methods.size());
        }
        e.coupling.a_norm = max_a ? e.coupling.attrs / static_cast<double>(max_a) : 0.0;
        e.coupling.m_norm = max_m ? e.coupling.methods / static_cast<double>(max_m) : 0.0;
        e.coupling.scplx = scplx(e.coupling, options.weights);
    }
    return g;
}

RelationshipStats relationship_stats(const Eord& eord) {
    RelationshipStats stats;
    stats.edges = static_cast<int>(eord.edges.size());
    std::set<std::string> touched;
    for (const auto& e : eord.edges) {
        switch (e.label) {
            case EdgeLabel::D: ++stats.direct_only; break;
            case EdgeLabel::T: ++stats.transitive_only; break;
            case EdgeLabel::C: ++stats.combined; break;
        }
        if (e.label != EdgeLabel::D) {
            touched.insert(e.from);
            touched.insert(e.to);
        }
    }
    if (stats.edges > 0)
        stats.transitive_fraction =
            (stats.transitive_only + stats.combined) / static_cast<double>(stats.edges);
    stats.classes_with_transitive = static_cast<int>(touched.size());
    std::set<std::pair<std::string, std::string>> members;
    for (const auto& chain : eord.chains)
        for (const auto& n : chain.path) members.insert({n.cls, n.member});
    stats.members_in_chains = static_cast<int>(members.size());
    stats.chain_count = static_cast<int>(eord.chains.size());
    return stats;
}

std::string eord_to_dot(const Eord& eord) {
    std::ostringstream out;
    out << "digraph \"" << eord.name << "\" {\n";
    for (const auto& n : eord.nodes) out << "    \"" << n << "\";\n";
    for (const auto& e : eord.edges) {
        out << "    \"" << e.from << "\" -> \"" << e.to << "\" [label=\""
            << to_string(e.label);
        if (e.label != EdgeLabel::D) out << " " << e.coupling.t;
        out << "\"";
        if (e.label == EdgeLabel::T) out << ", style=dashed";
        if (e.label == EdgeLabel::C) out << ", style=bold";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace citorder

#include "citorder/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "citorder/error.hpp"

namespace citorder {

namespace {

std::string class_name(int i, int width) {
    std::string digits = std::to_string(i);
    while (static_cast<int>(digits.size()) < width) digits.insert(digits.begin(), '0');
    return "C" + digits;
}

template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

Cfg straight_call_cfg(CallSite call) {
    Cfg cfg;
    cfg.entry = 0;
    BasicBlock b;
    b.id = 0;
    b.statements.push_back(Statement{0, 1, StmtKind::call, std::move(call)});
    cfg.blocks.push_back(std::move(b));
    return cfg;
}

Cfg branched_call_cfg(CallSite call) {
    Cfg cfg;
    cfg.entry = 0;
    BasicBlock head;
    head.id = 0;
    head.branch = BranchStmt{BranchKind::if_branch, 0,
                             PredicateExpr::cmp("p0", CmpOp::gt, 1.0)};
    BasicBlock then_block;
    then_block.id = 1;
    then_block.statements.push_back(Statement{0, 2, StmtKind::call, std::move(call)});
    BasicBlock join;
    join.id = 2;
    cfg.blocks.push_back(std::move(head));
    cfg.blocks.push_back(std::move(then_block));
    cfg.blocks.push_back(std::move(join));
    cfg.edges.push_back({0, 1, EdgeKind::branch_true, -1});
    cfg.edges.push_back({0, 2, EdgeKind::branch_false, -1});
    cfg.edges.push_back({1, 2, EdgeKind::fallthrough, -1});
    return cfg;
}

Cfg empty_cfg() {
    Cfg cfg;
    cfg.entry = 0;
    cfg.blocks.push_back(BasicBlock{0, {}, std::nullopt});
    return cfg;
}

}  // namespace

ProgramModel generate_synthetic(const SynthSpec& spec) {
    if (spec.classes < 1) throw InputError("class count must be at least 1");
    for (double density : {spec.edge_density, spec.branch_density, spec.chain_fraction})
        if (density < 0.0 || density > 1.0)
            throw InputError("densities must lie in [0,1]");

    const int n = spec.classes;
    const int width =
        std::max<int>(2, static_cast<int>(std::to_string(n - 1).size()));
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(class_name(i, width));

    std::mt19937_64 rng(spec.seed);

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) pairs.push_back({i, j});
    shuffle(pairs, rng);
    const int edge_count = static_cast<int>(
        std::llround(spec.edge_density * static_cast<double>(n) * (n - 1)));
    pairs.resize(edge_count);

    // Per-class out-edges, in global edge order; edge k becomes the
    // (position+1)-th generated method of its source class.
    std::vector<std::vector<int>> outs(n);
    std::vector<std::string> edge_method(edge_count);
    for (int k = 0; k < edge_count; ++k) {
        auto& list = outs[pairs[k].first];
        list.push_back(k);
        edge_method[k] = "m" + std::to_string(list.size());
    }

    // Chain-inducing calls target a method of the callee that itself calls
    // out, so chains of length 3 appear; only callees with out-edges qualify.
    std::vector<int> chain_candidates;
    for (int k = 0; k < edge_count; ++k)
        if (!outs[pairs[k].second].empty()) chain_candidates.push_back(k);
    shuffle(chain_candidates, rng);
    const std::size_t chain_count =
        std::min(chain_candidates.size(),
                 static_cast<std::size_t>(
                     std::llround(spec.chain_fraction * edge_count)));
    std::set<int> chain_edges(chain_candidates.begin(),
                              chain_candidates.begin() + chain_count);

    std::vector<int> branch_candidates;
    for (int k = 0; k < edge_count; ++k) branch_candidates.push_back(k);
    shuffle(branch_candidates, rng);
    const std::size_t branch_count = static_cast<std::size_t>(
        std::llround(spec.branch_density * edge_count));
    std::set<int> branch_edges(branch_candidates.begin(),
                               branch_candidates.begin() + branch_count);

    ProgramModel model;
    model.name = "synth-" + std::to_string(spec.seed) + "-" + std::to_string(n);
    for (int i = 0; i < n; ++i) {
        ClassDecl cls;
        cls.name = names[i];
        cls.attributes.push_back({"a0", "int"});
        MethodDecl base;
        base.name = "m0";
        base.return_type = "void";
        base.cfg = empty_cfg();
        cls.methods.push_back(std::move(base));
        for (int k : outs[i]) {
            const int target = pairs[k].second;
            std::string target_member = "m0";
            if (chain_edges.count(k) && !outs[target].empty())
                target_member = edge_method[outs[target].front()];
            CallSite call{names[target], target_member, MemberKind::method};
            MethodDecl m;
            m.name = edge_method[k];
            m.params.push_back({"p0", "int"});
            m.return_type = "void";
            m.cfg = branch_edges.count(k) ? branched_call_cfg(std::move(call))
                                          : straight_call_cfg(std::move(call));
            cls.methods.push_back(std::move(m));
        }
        model.classes.push_back(std::move(cls));
    }
    validate(model);
    return model;
}

}  // namespace citorder

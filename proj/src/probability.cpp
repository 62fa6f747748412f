#include "citorder/probability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "citorder/error.hpp"

namespace citorder {

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::then_branch: return "true";
        case Outcome::else_branch: return "false";
        case Outcome::case_arm: return "case";
        case Outcome::loop_body: return "loop-body";
    }
    return "?";
}

namespace {

std::optional<PathConstraint> edge_constraint(const CfgEdge& e) {
    switch (e.kind) {
        case EdgeKind::branch_true:
            return PathConstraint{e.from, Outcome::then_branch, -1};
        case EdgeKind::branch_false:
            return PathConstraint{e.from, Outcome::else_branch, -1};
        case EdgeKind::case_arm:
            return PathConstraint{e.from, Outcome::case_arm, e.arm};
        case EdgeKind::loop_body:
            return PathConstraint{e.from, Outcome::loop_body, -1};
        case EdgeKind::loop_exit:
        case EdgeKind::fallthrough:
            return std::nullopt;
    }
    return std::nullopt;
}

// Open/closed interval with excluded points, for the same-variable
// contradiction check on conjunctions.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool lo_open = false;
    bool hi_open = false;
    std::set<double> excluded;

    void upper(double v, bool open) {
        if (v < hi || (v == hi && open && !hi_open)) {
            hi = v;
            hi_open = open;
        }
    }

    void lower(double v, bool open) {
        if (v > lo || (v == lo && open && !lo_open)) {
            lo = v;
            lo_open = open;
        }
    }

    void apply(CmpOp op, double v) {
        switch (op) {
            case CmpOp::lt: upper(v, true); break;
            case CmpOp::le: upper(v, false); break;
            case CmpOp::gt: lower(v, true); break;
            case CmpOp::ge: lower(v, false); break;
            case CmpOp::eq:
                lower(v, false);
                upper(v, false);
                break;
            case CmpOp::ne: excluded.insert(v); break;
        }
    }

    bool empty() const {
        if (lo > hi) return true;
        if (lo == hi && (lo_open || hi_open)) return true;
        if (lo == hi && excluded.count(lo)) return true;
        return false;
    }
};

CmpOp negate(CmpOp op) {
    switch (op) {
        case CmpOp::lt: return CmpOp::ge;
        case CmpOp::le: return CmpOp::gt;
        case CmpOp::gt: return CmpOp::le;
        case CmpOp::ge: return CmpOp::lt;
        case CmpOp::eq: return CmpOp::ne;
        case CmpOp::ne: return CmpOp::eq;
    }
    return op;
}

std::optional<double> numeric_rhs(const PredicateExpr::Rhs& rhs) {
    if (const double* d = std::get_if<double>(&rhs)) return *d;
    if (const bool* b = std::get_if<bool>(&rhs)) return *b ? 1.0 : 0.0;
    return std::nullopt;
}

// Extracts (var, op, constant) from a cmp leaf or a NOT over one.
struct VarConstraint {
    std::string var;
    CmpOp op;
    double value;
};

std::optional<VarConstraint> as_var_constraint(const PredicateExpr& e) {
    if (e.kind == PredicateExpr::Kind::cmp) {
        if (auto v = numeric_rhs(e.rhs)) return VarConstraint{e.var, e.op, *v};
        return std::nullopt;
    }
    if (e.kind == PredicateExpr::Kind::not_op && e.args.size() == 1) {
        if (auto inner = as_var_constraint(e.args[0]))
            return VarConstraint{inner->var, negate(inner->op), inner->value};
    }
    return std::nullopt;
}

bool conjunction_contradicts(const std::vector<PredicateExpr>& args) {
    std::map<std::string, Interval> intervals;
    for (const auto& a : args)
        if (auto c = as_var_constraint(a)) intervals[c->var].apply(c->op, c->value);
    for (const auto& [var, iv] : intervals)
        if (iv.empty()) return true;
    return false;
}

int count_opaque(const PredicateExpr& e) {
    if (e.kind == PredicateExpr::Kind::opaque) return 1;
    int n = 0;
    for (const auto& a : e.args) n += count_opaque(a);
    return n;
}

}  // namespace

double predicate_probability(const PredicateExpr& pred,
                             std::optional<double> opaque_value) {
    switch (pred.kind) {
        case PredicateExpr::Kind::cmp:
            return 0.5;
        case PredicateExpr::Kind::opaque:
            return opaque_value.value_or(0.5);
        case PredicateExpr::Kind::not_op:
            return 1.0 - predicate_probability(pred.args[0], opaque_value);
        case PredicateExpr::Kind::and_op: {
            if (conjunction_contradicts(pred.args)) return 0.0;
            double p = 1.0;
            for (const auto& a : pred.args) p *= predicate_probability(a, opaque_value);
            return p;
        }
        case PredicateExpr::Kind::or_op: {
            double q = 1.0;
            for (const auto& a : pred.args)
                q *= 1.0 - predicate_probability(a, opaque_value);
            return 1.0 - q;
        }
    }
    throw InternalError("unhandled predicate kind");
}

std::map<int, std::vector<PathConstraint>> all_path_conditions(const Cfg& cfg) {
    std::map<int, std::optional<std::set<PathConstraint>>> state;
    for (const auto& b : cfg.blocks) state[b.id] = std::nullopt;
    state[cfg.entry] = std::set<PathConstraint>{};

    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& e : cfg.edges) {
            const auto& src = state.at(e.from);
            if (!src) continue;
            std::set<PathConstraint> in = *src;
            if (auto c = edge_constraint(e)) in.insert(*c);
            auto& dst = state.at(e.to);
            if (!dst) {
                dst = std::move(in);
                changed = true;
            } else {
                std::set<PathConstraint> meet;
                std::set_intersection(dst->begin(), dst->end(), in.begin(), in.end(),
                                      std::inserter(meet, meet.begin()));
                if (meet != *dst) {
                    dst = std::move(meet);
                    changed = true;
                }
            }
        }
    }

    std::map<int, std::vector<PathConstraint>> out;
    for (const auto& [id, set] : state) {
        if (!set) throw InternalError("unreachable block in path analysis");
        out.emplace(id, std::vector<PathConstraint>(set->begin(), set->end()));
    }
    return out;
}

std::vector<PathConstraint> gen_path_condition(const Cfg& cfg, int block_id) {
    auto all = all_path_conditions(cfg);
    auto it = all.find(block_id);
    if (it == all.end()) throw InputError("unknown block id " + std::to_string(block_id));
    return std::move(it->second);
}

namespace {

int case_arm_count(const Cfg& cfg, int block_id) {
    int n = 0;
    for (const auto& e : cfg.edges)
        if (e.from == block_id && e.kind == EdgeKind::case_arm) ++n;
    return n;
}

}  // namespace

void Analyzer::analyze_method(const ClassDecl& cls, const MethodDecl& method) {
    const Cfg& cfg = method.cfg;
    MethodAnalysis ma;
    ma.class_name = cls.name;
    ma.method_name = method.name;
    ma.block_paths = all_path_conditions(cfg);

    // Blocks whose if-predicate holds exactly one opaque atom and whose body
    // ends with call statements: the atom's probability is the probability of
    // the block's last call statement (the call evaluated by the condition).
    std::map<int, int> linked_stmt;
    for (const auto& b : cfg.blocks) {
        if (!b.branch || b.branch->kind != BranchKind::if_branch) continue;
        if (!b.branch->predicate || count_opaque(*b.branch->predicate) != 1) continue;
        const Statement* last_call = nullptr;
        for (const auto& s : b.statements)
            if (s.kind == StmtKind::call) last_call = &s;
        if (last_call) linked_stmt[b.id] = last_call->id;
    }

    std::map<int, double> subst;
    auto constraint_prob = [&](const PathConstraint& c) -> double {
        switch (c.outcome) {
            case Outcome::loop_body:
                return 1.0;
            case Outcome::case_arm: {
                const int n = case_arm_count(cfg, c.block);
                return n > 0 ? 1.0 / n : 1.0;
            }
            case Outcome::then_branch:
            case Outcome::else_branch: {
                const BasicBlock* b = cfg.block(c.block);
                if (!b || !b->branch || !b->branch->predicate) return 1.0;
                std::optional<double> opaque;
                if (auto it = subst.find(c.block); it != subst.end())
                    opaque = it->second;
                const double p = predicate_probability(*b->branch->predicate, opaque);
                return c.outcome == Outcome::then_branch ? p : 1.0 - p;
            }
        }
        return 1.0;
    };
    auto block_prob = [&](int block_id) {
        double p = 1.0;
        for (const auto& c : ma.block_paths.at(block_id)) p *= constraint_prob(c);
        return p;
    };
    auto stmt_block = [&](int stmt_id) -> int {
        for (const auto& b : cfg.blocks)
            for (const auto& s : b.statements)
                if (s.id == stmt_id) return b.id;
        throw InternalError("statement without block");
    };

    // Resolve linked atoms dependencies-first; members of dependency cycles
    // keep the plain 0.5.
    std::set<int> unresolved;
    for (const auto& [b, s] : linked_stmt) unresolved.insert(b);
    auto deps_of = [&](int b) {
        std::vector<int> deps;
        for (const auto& c : ma.block_paths.at(b))
            if ((c.outcome == Outcome::then_branch ||
                 c.outcome == Outcome::else_branch) &&
                linked_stmt.count(c.block))
                deps.push_back(c.block);
        return deps;
    };
    while (!unresolved.empty()) {
        bool progress = false;
        for (int b : unresolved) {
            bool ready = true;
            for (int d : deps_of(b))
                if (unresolved.count(d)) ready = false;
            if (!ready) continue;
            subst[b] = block_prob(stmt_block(linked_stmt.at(b)));
            unresolved.erase(b);
            progress = true;
            break;
        }
        if (progress) continue;
        // Every remaining block waits on another, so a dependency cycle
        // exists; peel the blocks that sit on one.
        std::vector<int> cyclic;
        for (int b : unresolved) {
            std::set<int> seen;
            std::vector<int> work = deps_of(b);
            bool reaches_self = false;
            while (!work.empty() && !reaches_self) {
                const int n = work.back();
                work.pop_back();
                if (n == b) {
                    reaches_self = true;
                    break;
                }
                if (!seen.insert(n).second || !unresolved.count(n)) continue;
                for (int d : deps_of(n)) work.push_back(d);
            }
            if (reaches_self) cyclic.push_back(b);
        }
        if (cyclic.empty()) throw InternalError("stuck resolving condition calls");
        for (int b : cyclic) {
            subst[b] = 0.5;
            unresolved.erase(b);
        }
    }

    for (const auto& b : cfg.blocks) {
        const double p = block_prob(b.id);
        for (const auto& s : b.statements) {
            StmtInfo info;
            info.class_name = cls.name;
            info.method_name = method.name;
            info.id = s.id;
            info.line = s.line;
            info.block = b.id;
            info.kind = s.kind;
            info.call = s.call;
            info.path = ma.block_paths.at(b.id);
            info.probability = p;
            ma.statements.push_back(std::move(info));
        }
    }
    std::sort(ma.statements.begin(), ma.statements.end(),
              [](const StmtInfo& a, const StmtInfo& b) { return a.id < b.id; });

    method_index_[{cls.name, method.name}] = methods_.size();
    methods_.push_back(std::move(ma));
}

Analyzer::Analyzer(const ProgramModel& model) : model_(&model) {
    for (const auto& cls : model.classes)
        for (const auto& m : cls.methods) analyze_method(cls, m);

    for (const auto& ma : methods_) {
        for (const auto& s : ma.statements) {
            if (s.kind != StmtKind::call) continue;
            CallOperation op{ma.class_name, s.call->target_class,
                             s.call->target_member, s.call->member_kind};
            auto it = pc_.find(op);
            if (it == pc_.end()) it = pc_.emplace(std::move(op), 1.0).first;
            it->second *= 1.0 - s.probability;
        }
    }
    for (auto& [op, v] : pc_) v = 1.0 - v;
}

const Analyzer::MethodAnalysis& Analyzer::find_method(const std::string& cls,
                                                      const std::string& method) const {
    auto it = method_index_.find({cls, method});
    if (it == method_index_.end())
        throw InputError("unknown method '" + cls + "." + method + "'");
    return methods_[it->second];
}

const std::vector<StmtInfo>& Analyzer::method_statements(
    const std::string& cls, const std::string& method) const {
    return find_method(cls, method).statements;
}

const std::vector<PathConstraint>& Analyzer::block_path(const std::string& cls,
                                                        const std::string& method,
                                                        int block_id) const {
    const MethodAnalysis& ma = find_method(cls, method);
    auto it = ma.block_paths.find(block_id);
    if (it == ma.block_paths.end())
        throw InputError("unknown block id " + std::to_string(block_id));
    return it->second;
}

double Analyzer::statement_probability(const std::string& cls,
                                       const std::string& method,
                                       int stmt_id) const {
    for (const auto& s : find_method(cls, method).statements)
        if (s.id == stmt_id) return s.probability;
    throw InputError("unknown statement id " + std::to_string(stmt_id));
}

std::vector<const StmtInfo*> Analyzer::matching_statements(
    const CallOperation& op) const {
    if (!model_->find_class(op.source_class))
        throw InputError("unknown class '" + op.source_class + "'");
    const ClassDecl* target = model_->find_class(op.target_class);
    if (!target || !declaring_class(*model_, *target, op.target_member, op.member_kind))
        throw InputError("unknown member '" + op.target_class + "." +
                         op.target_member + "'");
    std::vector<const StmtInfo*> out;
    for (const auto& ma : methods_) {
        if (ma.class_name != op.source_class) continue;
        for (const auto& s : ma.statements)
            if (s.kind == StmtKind::call && s.call->target_class == op.target_class &&
                s.call->target_member == op.target_member &&
                s.call->member_kind == op.member_kind)
                out.push_back(&s);
    }
    return out;
}

double Analyzer::operation_probability(const CallOperation& op) const {
    auto it = pc_.find(op);
    return it == pc_.end() ? 0.0 : it->second;
}

}  // namespace citorder

#include <algorithm>
#include <map>
#include <set>

#include "citorder/error.hpp"
#include "citorder/minij.hpp"

namespace citorder::minij {

namespace {

struct ResolvedType {
    std::string name;  // scalar name or class name
    bool is_class = false;
};

class MethodLowerer {
public:
    MethodLowerer(const ProgramModel& decls, const citorder::ClassDecl& self,
                  const std::string& path)
        : decls_(decls), self_(self), path_(path) {}

    Cfg run(const citorder::MethodDecl& sig, const minij::MethodDecl& ast) {
        scopes_.emplace_back();
        for (const auto& p : sig.params) {
            check_type(p.type, ast.line);
            declare(p.name, p.type, ast.line);
        }
        cur_ = new_block();
        cfg_.entry = cur_;
        lower_stmt(*ast.body);
        scopes_.pop_back();
        finish();
        return std::move(cfg_);
    }

private:
    const ProgramModel& decls_;
    const citorder::ClassDecl& self_;
    const std::string path_;
    Cfg cfg_;
    int next_block_ = 0;
    int next_stmt_ = 0;
    int cur_ = 0;
    bool terminated_ = false;
    std::vector<std::map<std::string, std::string>> scopes_;

    [[noreturn]] void error(const std::string& msg, int line) const {
        throw InputError(path_ + ":" + std::to_string(line) + ": " + msg);
    }

    int new_block() {
        cfg_.blocks.push_back(BasicBlock{next_block_, {}, std::nullopt});
        return next_block_++;
    }

    BasicBlock& blk(int id) {
        for (auto& b : cfg_.blocks)
            if (b.id == id) return b;
        throw InternalError("missing block");
    }

    void add_edge(int from, int to, EdgeKind kind, int arm = -1) {
        cfg_.edges.push_back({from, to, kind, arm});
    }

    void declare(const std::string& name, const std::string& type, int line) {
        if (!scopes_.back().emplace(name, type).second)
            error("redeclaration of '" + name + "'", line);
    }

    void check_type(const std::string& type, int line) const {
        if (!is_scalar_type(type) && !decls_.find_class(type))
            error("unknown type '" + type + "'", line);
    }

    const std::string* lookup_local(const std::string& name) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto found = it->find(name);
            if (found != it->end()) return &found->second;
        }
        return nullptr;
    }

    ResolvedType make_type(const std::string& name) const {
        return {name, !is_scalar_type(name) && decls_.find_class(name) != nullptr};
    }

    // Resolves an expression, appending every qualified member use (and
    // unqualified own-method call) to `uses` in evaluation order.
    ResolvedType resolve(const Expr& e, std::vector<CallSite>& uses) {
        switch (e.kind) {
            case Expr::Kind::int_lit: return {"int", false};
            case Expr::Kind::double_lit: return {"double", false};
            case Expr::Kind::bool_lit: return {"boolean", false};
            case Expr::Kind::new_object: {
                if (!decls_.find_class(e.name))
                    error("unknown class '" + e.name + "'", e.line);
                return {e.name, true};
            }
            case Expr::Kind::var: {
                if (const std::string* t = lookup_local(e.name)) return make_type(*t);
                if (const citorder::ClassDecl* owner =
                        declaring_class(decls_, self_, e.name, MemberKind::attribute))
                    return make_type(owner->attribute(e.name)->type);
                error("unknown identifier '" + e.name + "'", e.line);
            }
            case Expr::Kind::field: {
                ResolvedType base = resolve(*e.base, uses);
                if (!base.is_class)
                    error("member access on non-class value", e.line);
                const citorder::ClassDecl* owner = declaring_class(
                    decls_, *decls_.find_class(base.name), e.name, MemberKind::attribute);
                if (!owner)
                    error("unknown attribute '" + e.name + "' on class '" + base.name + "'",
                          e.line);
                uses.push_back({owner->name, e.name, MemberKind::attribute});
                return make_type(owner->attribute(e.name)->type);
            }
            case Expr::Kind::call: {
                const citorder::ClassDecl* target_scope = nullptr;
                if (e.base) {
                    ResolvedType base = resolve(*e.base, uses);
                    if (!base.is_class)
                        error("method call on non-class value", e.line);
                    target_scope = decls_.find_class(base.name);
                } else {
                    target_scope = &self_;
                }
                for (const auto& arg : e.args) resolve(*arg, uses);
                const citorder::ClassDecl* owner =
                    declaring_class(decls_, *target_scope, e.name, MemberKind::method);
                if (!owner)
                    error("unknown method '" + e.name + "' on class '" +
                              target_scope->name + "'",
                          e.line);
                uses.push_back({owner->name, e.name, MemberKind::method});
                return make_type(owner->method(e.name)->return_type);
            }
            case Expr::Kind::binary: {
                resolve(*e.base, uses);
                resolve(*e.rhs, uses);
                switch (e.bin_op) {
                    case BinOp::logical_or:
                    case BinOp::logical_and:
                    case BinOp::eq:
                    case BinOp::ne:
                    case BinOp::lt:
                    case BinOp::le:
                    case BinOp::gt:
                    case BinOp::ge:
                        return {"boolean", false};
                    default:
                        return {"int", false};
                }
            }
            case Expr::Kind::unary: {
                resolve(*e.base, uses);
                return {e.un_op == UnOp::logical_not ? "boolean" : "int", false};
            }
        }
        throw InternalError("unhandled expression kind");
    }

    void emit(int line, StmtKind kind, std::optional<CallSite> call = std::nullopt) {
        Statement s;
        s.id = next_stmt_++;
        s.line = line;
        s.kind = kind;
        s.call = std::move(call);
        blk(cur_).statements.push_back(std::move(s));
    }

    // Emits one call statement per member use; with no uses, emits a single
    // statement classified by `plain`.
    void emit_uses(int line, const std::vector<CallSite>& uses, StmtKind plain) {
        if (uses.empty()) {
            emit(line, plain);
            return;
        }
        for (const auto& u : uses) emit(line, StmtKind::call, u);
    }

    void note_dead_code(int) {
        if (terminated_) {
            // Statements after a return land in a fresh, unreachable block;
            // finish() reports them.
            cur_ = new_block();
            terminated_ = false;
        }
    }

    bool leaf_operand_ok(const Expr& e) const {
        return e.kind == Expr::Kind::int_lit || e.kind == Expr::Kind::double_lit ||
               e.kind == Expr::Kind::bool_lit || e.kind == Expr::Kind::var;
    }

    bool is_scalar_var(const Expr& e) const {
        if (e.kind != Expr::Kind::var) return false;
        if (const std::string* t = lookup_local(e.name)) return is_scalar_type(*t);
        if (const citorder::ClassDecl* owner =
                declaring_class(decls_, self_, e.name, MemberKind::attribute))
            return is_scalar_type(owner->attribute(e.name)->type);
        return false;
    }

    PredicateExpr::Rhs rhs_of(const Expr& e) const {
        switch (e.kind) {
            case Expr::Kind::int_lit: return static_cast<double>(e.int_value);
            case Expr::Kind::double_lit: return std::stod(e.double_text);
            case Expr::Kind::bool_lit: return e.bool_value;
            case Expr::Kind::var: return e.name;
            default: throw InternalError("not a leaf operand");
        }
    }

    static CmpOp flip(CmpOp op) {
        switch (op) {
            case CmpOp::lt: return CmpOp::gt;
            case CmpOp::le: return CmpOp::ge;
            case CmpOp::gt: return CmpOp::lt;
            case CmpOp::ge: return CmpOp::le;
            default: return op;
        }
    }

    void flatten(PredicateExpr::Kind kind, const Expr& e, std::vector<PredicateExpr>& out) {
        const BinOp op = kind == PredicateExpr::Kind::and_op ? BinOp::logical_and
                                                             : BinOp::logical_or;
        if (e.kind == Expr::Kind::binary && e.bin_op == op) {
            flatten(kind, *e.base, out);
            flatten(kind, *e.rhs, out);
        } else {
            out.push_back(build_predicate(e));
        }
    }

    PredicateExpr build_predicate(const Expr& e) {
        if (e.kind == Expr::Kind::binary &&
            (e.bin_op == BinOp::logical_and || e.bin_op == BinOp::logical_or)) {
            const auto kind = e.bin_op == BinOp::logical_and
                                  ? PredicateExpr::Kind::and_op
                                  : PredicateExpr::Kind::or_op;
            std::vector<PredicateExpr> args;
            flatten(kind, e, args);
            return PredicateExpr::logical(kind, std::move(args));
        }
        if (e.kind == Expr::Kind::unary && e.un_op == UnOp::logical_not) {
            std::vector<PredicateExpr> arg;
            arg.push_back(build_predicate(*e.base));
            return PredicateExpr::logical(PredicateExpr::Kind::not_op, std::move(arg));
        }
        if (e.kind == Expr::Kind::binary) {
            CmpOp op;
            switch (e.bin_op) {
                case BinOp::lt: op = CmpOp::lt; break;
                case BinOp::le: op = CmpOp::le; break;
                case BinOp::gt: op = CmpOp::gt; break;
                case BinOp::ge: op = CmpOp::ge; break;
                case BinOp::eq: op = CmpOp::eq; break;
                case BinOp::ne: op = CmpOp::ne; break;
                default: return PredicateExpr::opaque(print_expr(e));
            }
            if (is_scalar_var(*e.base) && leaf_operand_ok(*e.rhs) &&
                (e.rhs->kind != Expr::Kind::var || is_scalar_var(*e.rhs)))
                return PredicateExpr::cmp(e.base->name, op, rhs_of(*e.rhs));
            // Constant on the left: normalize to variable-first form.
            if (is_scalar_var(*e.rhs) && leaf_operand_ok(*e.base) &&
                e.base->kind != Expr::Kind::var)
                return PredicateExpr::cmp(e.rhs->name, flip(op), rhs_of(*e.base));
            return PredicateExpr::opaque(print_expr(e));
        }
        if (is_scalar_var(e)) return PredicateExpr::cmp(e.name, CmpOp::eq, true);
        return PredicateExpr::opaque(print_expr(e));
    }

    // Resolves a branch condition: member uses become call statements in the
    // current block (ahead of the terminator), the expression becomes a
    // predicate tree.
    PredicateExpr lower_condition(const Expr& cond, int line) {
        std::vector<CallSite> uses;
        resolve(cond, uses);
        for (const auto& u : uses) emit(line, StmtKind::call, u);
        return build_predicate(cond);
    }

    StmtKind plain_kind(const Stmt& s) const {
        switch (s.kind) {
            case Stmt::Kind::var_decl:
                return s.init ? StmtKind::assignment : StmtKind::other;
            case Stmt::Kind::assign:
                return StmtKind::assignment;
            case Stmt::Kind::return_stmt:
                return StmtKind::ret;
            case Stmt::Kind::expr:
                if (s.expr->kind == Expr::Kind::var && !lookup_local(s.expr->name) &&
                    declaring_class(decls_, self_, s.expr->name, MemberKind::attribute))
                    return StmtKind::attribute_access;
                return StmtKind::other;
            default:
                return StmtKind::other;
        }
    }

    void lower_simple(const Stmt& s) {
        std::vector<CallSite> uses;
        switch (s.kind) {
            case Stmt::Kind::var_decl: {
                check_type(s.decl_type, s.line);
                if (s.decl_type == "void") error("variables cannot be void", s.line);
                if (s.init) resolve(*s.init, uses);
                declare(s.decl_name, s.decl_type, s.line);
                break;
            }
            case Stmt::Kind::assign:
                resolve(*s.target, uses);
                resolve(*s.value, uses);
                break;
            case Stmt::Kind::expr:
                resolve(*s.expr, uses);
                break;
            case Stmt::Kind::return_stmt:
                if (s.expr) resolve(*s.expr, uses);
                break;
            default:
                throw InternalError("not a simple statement");
        }
        emit_uses(s.line, uses, plain_kind(s));
    }

    void lower_stmt(const Stmt& s) {
        switch (s.kind) {
            case Stmt::Kind::empty:
                return;
            case Stmt::Kind::block: {
                scopes_.emplace_back();
                for (const auto& inner : s.stmts) lower_stmt(*inner);
                scopes_.pop_back();
                return;
            }
            case Stmt::Kind::var_decl:
            case Stmt::Kind::assign:
            case Stmt::Kind::expr:
                note_dead_code(s.line);
                lower_simple(s);
                return;
            case Stmt::Kind::return_stmt:
                note_dead_code(s.line);
                lower_simple(s);
                terminated_ = true;
                return;
            case Stmt::Kind::if_stmt: {
                note_dead_code(s.line);
                PredicateExpr pred = lower_condition(*s.expr, s.line);
                const int head = cur_;
                blk(head).branch = BranchStmt{BranchKind::if_branch, 0, std::move(pred)};

                const int then_block = new_block();
                add_edge(head, then_block, EdgeKind::branch_true);
                cur_ = then_block;
                terminated_ = false;
                scopes_.emplace_back();
                lower_stmt(*s.then_branch);
                scopes_.pop_back();
                const int then_end = cur_;
                const bool then_done = terminated_;

                int else_block = -1;
                int else_end = -1;
                bool else_done = false;
                if (s.else_branch) {
                    else_block = new_block();
                    add_edge(head, else_block, EdgeKind::branch_false);
                    cur_ = else_block;
                    terminated_ = false;
                    scopes_.emplace_back();
                    lower_stmt(*s.else_branch);
                    scopes_.pop_back();
                    else_end = cur_;
                    else_done = terminated_;
                }

                const int join = new_block();
                if (!s.else_branch) add_edge(head, join, EdgeKind::branch_false);
                if (!then_done) add_edge(then_end, join, EdgeKind::fallthrough);
                if (s.else_branch && !else_done)
                    add_edge(else_end, join, EdgeKind::fallthrough);
                cur_ = join;
                terminated_ = then_done && else_done && s.else_branch != nullptr;
                return;
            }
            case Stmt::Kind::while_stmt:
            case Stmt::Kind::for_stmt: {
                note_dead_code(s.line);
                scopes_.emplace_back();
                if (s.kind == Stmt::Kind::for_stmt && s.init_stmt)
                    lower_simple(*s.init_stmt);

                const int header = new_block();
                add_edge(cur_, header, EdgeKind::fallthrough);
                cur_ = header;
                PredicateExpr pred = lower_condition(*s.expr, s.line);
                blk(header).branch =
                    BranchStmt{s.kind == Stmt::Kind::while_stmt ? BranchKind::while_loop
                                                                : BranchKind::for_loop,
                               0, std::move(pred)};

                const int body = new_block();
                add_edge(header, body, EdgeKind::loop_body);
                cur_ = body;
                terminated_ = false;
                scopes_.emplace_back();
                lower_stmt(*s.body);
                scopes_.pop_back();
                if (s.kind == Stmt::Kind::for_stmt && s.update_stmt && !terminated_)
                    lower_simple(*s.update_stmt);
                if (!terminated_) add_edge(cur_, header, EdgeKind::fallthrough);

                const int after = new_block();
                add_edge(header, after, EdgeKind::loop_exit);
                cur_ = after;
                terminated_ = false;
                scopes_.pop_back();
                return;
            }
            case Stmt::Kind::switch_stmt: {
                note_dead_code(s.line);
                std::vector<CallSite> uses;
                resolve(*s.expr, uses);
                for (const auto& u : uses) emit(s.line, StmtKind::call, u);
                const int head = cur_;
                blk(head).branch = BranchStmt{BranchKind::switch_branch,
                                              static_cast<int>(s.arms.size()),
                                              std::nullopt};

                const int join = new_block();
                bool has_default = false;
                for (std::size_t k = 0; k < s.arms.size(); ++k) {
                    const SwitchArm& arm = s.arms[k];
                    if (arm.is_default) has_default = true;
                    const int arm_block = new_block();
                    add_edge(head, arm_block, EdgeKind::case_arm, static_cast<int>(k));
                    cur_ = arm_block;
                    terminated_ = false;
                    scopes_.emplace_back();
                    for (const auto& inner : arm.body) lower_stmt(*inner);
                    scopes_.pop_back();
                    if (!terminated_) add_edge(cur_, join, EdgeKind::fallthrough);
                }
                if (!has_default)
                    add_edge(head, join, EdgeKind::case_arm,
                             static_cast<int>(s.arms.size()));
                cur_ = join;
                terminated_ = false;
                return;
            }
        }
    }

    // Cleans up the raw block graph: reports reachable dead code, drops
    // unreachable empty blocks, bypasses empty pass-through blocks, merges
    // straight-line chains, and renumbers blocks densely.
    void finish() {
        for (bool changed = true; changed;) {
            changed = false;

            std::set<int> reachable;
            std::vector<int> work{cfg_.entry};
            while (!work.empty()) {
                const int id = work.back();
                work.pop_back();
                if (!reachable.insert(id).second) continue;
                for (const auto& e : cfg_.edges)
                    if (e.from == id) work.push_back(e.to);
            }
            for (auto it = cfg_.blocks.begin(); it != cfg_.blocks.end();) {
                if (reachable.count(it->id)) {
                    ++it;
                    continue;
                }
                if (!it->statements.empty())
                    error("unreachable code", it->statements.front().line);
                const int dead = it->id;
                std::erase_if(cfg_.edges, [dead](const CfgEdge& e) {
                    return e.from == dead || e.to == dead;
                });
                it = cfg_.blocks.erase(it);
                changed = true;
            }

            for (auto& b : cfg_.blocks) {
                if (!b.statements.empty() || b.branch) continue;
                std::vector<CfgEdge*> outs;
                for (auto& e : cfg_.edges)
                    if (e.from == b.id) outs.push_back(&e);
                if (outs.size() != 1 || outs[0]->kind != EdgeKind::fallthrough ||
                    outs[0]->to == b.id)
                    continue;
                const int target = outs[0]->to;
                const int dead = b.id;
                if (dead == cfg_.entry) {
                    bool has_in = false;
                    for (const auto& e : cfg_.edges)
                        if (e.to == dead) has_in = true;
                    if (has_in) continue;
                    cfg_.entry = target;
                }
                for (auto& e : cfg_.edges)
                    if (e.to == dead) e.to = target;
                std::erase_if(cfg_.edges,
                              [dead](const CfgEdge& e) { return e.from == dead; });
                std::erase_if(cfg_.blocks,
                              [dead](const BasicBlock& b2) { return b2.id == dead; });
                changed = true;
                break;
            }
            if (changed) continue;

            // Merge a branchless block into its sole fallthrough successor
            // when it is the successor's only predecessor.
            for (auto& a : cfg_.blocks) {
                if (a.branch) continue;
                std::vector<CfgEdge*> outs;
                for (auto& e : cfg_.edges)
                    if (e.from == a.id) outs.push_back(&e);
                if (outs.size() != 1 || outs[0]->kind != EdgeKind::fallthrough)
                    continue;
                const int target_id = outs[0]->to;
                if (target_id == a.id || target_id == cfg_.entry) continue;
                int preds = 0;
                for (const auto& e : cfg_.edges)
                    if (e.to == target_id) ++preds;
                if (preds != 1) continue;
                BasicBlock& b = blk(target_id);
                for (auto& st : b.statements) a.statements.push_back(std::move(st));
                a.branch = std::move(b.branch);
                std::erase_if(cfg_.edges, [&](const CfgEdge& e) {
                    return e.from == a.id && e.to == target_id;
                });
                for (auto& e : cfg_.edges)
                    if (e.from == target_id) e.from = a.id;
                std::erase_if(cfg_.blocks, [target_id](const BasicBlock& b2) {
                    return b2.id == target_id;
                });
                changed = true;
                break;
            }
        }

        std::map<int, int> renumber;
        for (auto& b : cfg_.blocks) {
            const int fresh = static_cast<int>(renumber.size());
            renumber[b.id] = fresh;
            b.id = fresh;
        }
        for (auto& e : cfg_.edges) {
            e.from = renumber.at(e.from);
            e.to = renumber.at(e.to);
        }
        cfg_.entry = renumber.at(cfg_.entry);
    }
};

}  // namespace

ProgramModel lower(const std::vector<Unit>& units, const std::string& model_name) {
    ProgramModel model;
    model.name = model_name;

    std::map<std::string, const minij::ClassDecl*> asts;
    for (const auto& unit : units) {
        for (const auto& cls : unit.classes) {
            if (!asts.emplace(cls.name, &cls).second)
                throw InputError(unit.path + ":" + std::to_string(cls.line) +
                                 ": duplicate class '" + cls.name + "'");
            citorder::ClassDecl decl;
            decl.name = cls.name;
            decl.extends = cls.extends;
            for (const auto& f : cls.fields)
                decl.attributes.push_back({f.name, f.type});
            for (const auto& m : cls.methods) {
                citorder::MethodDecl method;
                method.name = m.name;
                method.return_type = m.return_type;
                for (const auto& p : m.params) method.params.push_back({p.name, p.type});
                decl.methods.push_back(std::move(method));
            }
            model.classes.push_back(std::move(decl));
        }
    }

    std::map<std::string, std::string> paths;
    for (const auto& unit : units)
        for (const auto& cls : unit.classes) paths[cls.name] = unit.path;

    for (auto& cls : model.classes) {
        const minij::ClassDecl& ast = *asts.at(cls.name);
        const std::string& path = paths.at(cls.name);
        for (std::size_t i = 0; i < cls.methods.size(); ++i) {
            MethodLowerer lowerer(model, cls, path);
            cls.methods[i].cfg = lowerer.run(cls.methods[i], ast.methods[i]);
        }
    }

    validate(model);
    return model;
}

}  // namespace citorder::minij

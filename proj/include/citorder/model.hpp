#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace citorder {

enum class MemberKind { method, attribute };

enum class StmtKind { call, attribute_access, assignment, ret, other };

enum class BranchKind { if_branch, while_loop, for_loop, switch_branch };

enum class EdgeKind { fallthrough, branch_true, branch_false, case_arm, loop_body, loop_exit };

enum class CmpOp { lt, le, gt, ge, eq, ne };

// Target of a statement-level member use. The calling class and method are
// implied by the statement's position in the model.
struct CallSite {
    std::string target_class;
    std::string target_member;
    MemberKind member_kind = MemberKind::method;

    bool operator==(const CallSite&) const = default;
};

struct Statement {
    int id = 0;  // ordinal within the enclosing method, assigned in source order
    int line = 0;
    StmtKind kind = StmtKind::other;
    std::optional<CallSite> call;

    bool operator==(const Statement&) const = default;
};

// Branch predicate tree. Leaves are either a comparison of a variable against
// a constant or another variable, or an opaque atom holding unmodeled text.
struct PredicateExpr {
    enum class Kind { cmp, opaque, and_op, or_op, not_op };

    // rhs of a comparison leaf: numeric constant, boolean constant, or the
    // name of another variable.
    using Rhs = std::variant<double, bool, std::string>;

    Kind kind = Kind::opaque;
    std::string var;  // cmp leaf
    CmpOp op = CmpOp::lt;
    Rhs rhs = 0.0;
    std::string text;  // opaque leaf
    std::vector<PredicateExpr> args;

    bool operator==(const PredicateExpr&) const = default;

    static PredicateExpr cmp(std::string v, CmpOp o, Rhs r) {
        PredicateExpr p;
        p.kind = Kind::cmp;
        p.var = std::move(v);
        p.op = o;
        p.rhs = std::move(r);
        return p;
    }
    static PredicateExpr opaque(std::string t) {
        PredicateExpr p;
        p.kind = Kind::opaque;
        p.text = std::move(t);
        return p;
    }
    static PredicateExpr logical(Kind k, std::vector<PredicateExpr> a) {
        PredicateExpr p;
        p.kind = k;
        p.args = std::move(a);
        return p;
    }
};

struct BranchStmt {
    BranchKind kind = BranchKind::if_branch;
    int arms = 0;  // switch only, declared arms including default
    std::optional<PredicateExpr> predicate;

    bool operator==(const BranchStmt&) const = default;
};

struct CfgEdge {
    int from = 0;
    int to = 0;
    EdgeKind kind = EdgeKind::fallthrough;
    int arm = -1;  // case_arm only

    bool operator==(const CfgEdge&) const = default;
};

struct BasicBlock {
    int id = 0;
    std::vector<Statement> statements;
    std::optional<BranchStmt> branch;

    bool operator==(const BasicBlock&) const = default;
};

struct Cfg {
    int entry = 0;
    std::vector<BasicBlock> blocks;
    std::vector<CfgEdge> edges;

    bool operator==(const Cfg&) const = default;

    const BasicBlock* block(int id) const {
        for (const auto& b : blocks)
            if (b.id == id) return &b;
        return nullptr;
    }
};

struct Param {
    std::string name;
    std::string type;

    bool operator==(const Param&) const = default;
};

struct MethodDecl {
    std::string name;
    std::vector<Param> params;
    std::string return_type = "void";
    Cfg cfg;

    bool operator==(const MethodDecl&) const = default;
};

struct AttributeDecl {
    std::string name;
    std::string type;

    bool operator==(const AttributeDecl&) const = default;
};

struct ClassDecl {
    std::string name;
    std::optional<std::string> extends;
    std::vector<AttributeDecl> attributes;
    std::vector<MethodDecl> methods;

    bool operator==(const ClassDecl&) const = default;

    const MethodDecl* method(const std::string& n) const {
        for (const auto& m : methods)
            if (m.name == n) return &m;
        return nullptr;
    }
    const AttributeDecl* attribute(const std::string& n) const {
        for (const auto& a : attributes)
            if (a.name == n) return &a;
        return nullptr;
    }
};

struct ProgramModel {
    std::string name;
    std::vector<ClassDecl> classes;

    bool operator==(const ProgramModel&) const = default;

    const ClassDecl* find_class(const std::string& n) const {
        for (const auto& c : classes)
            if (c.name == n) return &c;
        return nullptr;
    }
};

bool is_scalar_type(const std::string& type);

// Walks the extends chain of `cls` and returns the class that declares
// `member` of the given kind, or nullptr.
const ClassDecl* declaring_class(const ProgramModel& model, const ClassDecl& cls,
                                 const std::string& member, MemberKind kind);

// Checks every structural invariant of the model and throws InputError with a
// descriptive message on the first violation.
void validate(const ProgramModel& model);

const char* to_string(MemberKind k);
const char* to_string(StmtKind k);
const char* to_string(BranchKind k);
const char* to_string(CmpOp op);
std::string to_string(const PredicateExpr& pred);

}  // namespace citorder

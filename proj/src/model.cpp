#include "citorder/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "citorder/error.hpp"

namespace citorder {

bool is_scalar_type(const std::string& type) {
    return type == "int" || type == "double" || type == "boolean";
}

const char* to_string(MemberKind k) {
    return k == MemberKind::method ? "method" : "attribute";
}

const char* to_string(StmtKind k) {
    switch (k) {
        case StmtKind::call: return "call";
        case StmtKind::attribute_access: return "attribute-access";
        case StmtKind::assignment: return "assignment";
        case StmtKind::ret: return "return";
        case StmtKind::other: return "other";
    }
    return "other";
}

const char* to_string(BranchKind k) {
    switch (k) {
        case BranchKind::if_branch: return "if";
        case BranchKind::while_loop: return "while";
        case BranchKind::for_loop: return "for";
        case BranchKind::switch_branch: return "switch";
    }
    return "if";
}

const char* to_string(CmpOp op) {
    switch (op) {
        case CmpOp::lt: return "<";
        case CmpOp::le: return "<=";
        case CmpOp::gt: return ">";
        case CmpOp::ge: return ">=";
        case CmpOp::eq: return "==";
        case CmpOp::ne: return "!=";
    }
    return "<";
}

namespace {

std::string number_text(double v) {
    if (v == static_cast<long long>(v) && std::abs(v) < 1e15)
        return std::to_string(static_cast<long long>(v));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

std::string to_string(const PredicateExpr& pred) {
    switch (pred.kind) {
        case PredicateExpr::Kind::cmp: {
            std::string rhs;
            if (const double* d = std::get_if<double>(&pred.rhs))
                rhs = number_text(*d);
            else if (const bool* b = std::get_if<bool>(&pred.rhs))
                rhs = *b ? "true" : "false";
            else
                rhs = std::get<std::string>(pred.rhs);
            return pred.var + " " + to_string(pred.op) + " " + rhs;
        }
        case PredicateExpr::Kind::opaque:
            return pred.text;
        case PredicateExpr::Kind::not_op:
            return "!(" + to_string(pred.args[0]) + ")";
        case PredicateExpr::Kind::and_op:
        case PredicateExpr::Kind::or_op: {
            const char* sep = pred.kind == PredicateExpr::Kind::and_op ? " && " : " || ";
            std::string out = "(";
            for (std::size_t i = 0; i < pred.args.size(); ++i) {
                if (i) out += sep;
                out += to_string(pred.args[i]);
            }
            return out + ")";
        }
    }
    return "?";
}

const ClassDecl* declaring_class(const ProgramModel& model, const ClassDecl& cls,
                                 const std::string& member, MemberKind kind) {
    const ClassDecl* cur = &cls;
    std::set<const ClassDecl*> seen;
    while (cur && seen.insert(cur).second) {
        if (kind == MemberKind::method ? cur->method(member) != nullptr
                                       : cur->attribute(member) != nullptr)
            return cur;
        cur = cur->extends ? model.find_class(*cur->extends) : nullptr;
    }
    return nullptr;
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw InputError(msg); }

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

void validate_type_ref(const ProgramModel& model, const std::string& type,
                       const std::string& where, bool allow_void) {
    if (is_scalar_type(type)) return;
    if (allow_void && type == "void") return;
    if (!model.find_class(type))
        fail(where + ": unresolved reference to type '" + type + "'");
}

void validate_cfg(const ProgramModel& model, const ClassDecl& cls,
                  const MethodDecl& method) {
    const std::string where = cls.name + "." + method.name;
    const Cfg& cfg = method.cfg;
    if (cfg.blocks.empty()) fail(where + ": cfg has no blocks");

    std::map<int, const BasicBlock*> by_id;
    for (const auto& b : cfg.blocks) {
        if (!by_id.emplace(b.id, &b).second)
            fail(where + ": duplicate block id " + std::to_string(b.id));
    }
    if (!by_id.count(cfg.entry))
        fail(where + ": entry block " + std::to_string(cfg.entry) + " does not exist");

    std::set<int> stmt_ids;
    for (const auto& b : cfg.blocks) {
        for (const auto& s : b.statements) {
            if (!stmt_ids.insert(s.id).second)
                fail(where + ": duplicate statement id " + std::to_string(s.id));
            if ((s.kind == StmtKind::call) != s.call.has_value())
                fail(where + ": statement " + std::to_string(s.id) +
                     " must carry a call site exactly when its kind is 'call'");
            if (s.call) {
                const ClassDecl* target = model.find_class(s.call->target_class);
                if (!target)
                    fail(where + ": unresolved reference to class '" +
                         s.call->target_class + "'");
                if (!declaring_class(model, *target, s.call->target_member,
                                     s.call->member_kind))
                    fail(where + ": unresolved reference to " +
                         std::string(to_string(s.call->member_kind)) + " '" +
                         s.call->target_class + "." + s.call->target_member + "'");
            }
        }
        if (b.branch) {
            const BranchStmt& br = *b.branch;
            if (br.kind == BranchKind::switch_branch) {
                if (br.arms < 1)
                    fail(where + ": switch branch in block " + std::to_string(b.id) +
                         " needs at least one arm");
            } else if (!br.predicate) {
                fail(where + ": branch in block " + std::to_string(b.id) +
                     " has no predicate");
            }
        }
    }

    std::map<int, std::vector<const CfgEdge*>> out;
    for (const auto& e : cfg.edges) {
        if (!by_id.count(e.from) || !by_id.count(e.to))
            fail(where + ": edge " + std::to_string(e.from) + "->" +
                 std::to_string(e.to) + " references a missing block");
        out[e.from].push_back(&e);
    }

    for (const auto& b : cfg.blocks) {
        const auto& edges = out[b.id];
        auto count = [&](EdgeKind k) {
            return std::count_if(edges.begin(), edges.end(),
                                 [&](const CfgEdge* e) { return e->kind == k; });
        };
        const std::string blk = where + ": block " + std::to_string(b.id);
        if (!b.branch) {
            if (edges.size() > 1 || count(EdgeKind::fallthrough) != static_cast<long>(edges.size()))
                fail(blk + " has no branch but multiple or non-fallthrough out edges");
            continue;
        }
        switch (b.branch->kind) {
            case BranchKind::if_branch:
                if (count(EdgeKind::branch_true) != 1 || count(EdgeKind::branch_false) != 1 ||
                    edges.size() != 2)
                    fail(blk + " must have exactly one branch-true and one branch-false edge");
                break;
            case BranchKind::while_loop:
            case BranchKind::for_loop:
                if (count(EdgeKind::loop_body) != 1 || count(EdgeKind::loop_exit) > 1 ||
                    static_cast<long>(edges.size()) !=
                        count(EdgeKind::loop_body) + count(EdgeKind::loop_exit))
                    fail(blk + " must have one loop-body edge and at most one loop-exit edge");
                break;
            case BranchKind::switch_branch: {
                std::set<int> arms_seen;
                for (const CfgEdge* e : edges) {
                    if (e->kind != EdgeKind::case_arm)
                        fail(blk + " switch edges must all be case edges");
                    if (e->arm < 0 || e->arm > b.branch->arms)
                        fail(blk + " case arm " + std::to_string(e->arm) + " out of range");
                    if (!arms_seen.insert(e->arm).second)
                        fail(blk + " duplicate case arm " + std::to_string(e->arm));
                }
                if (edges.empty()) fail(blk + " switch has no case edges");
                break;
            }
        }
    }

    std::set<int> reachable;
    std::vector<int> work{cfg.entry};
    while (!work.empty()) {
        int id = work.back();
        work.pop_back();
        if (!reachable.insert(id).second) continue;
        for (const CfgEdge* e : out[id]) work.push_back(e->to);
    }
    for (const auto& b : cfg.blocks)
        if (!reachable.count(b.id))
            fail(where + ": block " + std::to_string(b.id) + " is unreachable from entry");
}

}  // namespace

void validate(const ProgramModel& model) {
    std::set<std::string> class_names;
    for (const auto& cls : model.classes) {
        if (!is_identifier(cls.name))
            fail("class name '" + cls.name + "' is not an identifier");
        if (is_scalar_type(cls.name) || cls.name == "void")
            fail("class name '" + cls.name + "' shadows a builtin type");
        if (!class_names.insert(cls.name).second)
            fail("duplicate class name '" + cls.name + "'");
    }

    for (const auto& cls : model.classes) {
        if (cls.extends) {
            if (*cls.extends == cls.name)
                fail("class '" + cls.name + "' extends itself");
            if (!model.find_class(*cls.extends))
                fail(cls.name + ": unresolved reference to class '" + *cls.extends + "'");
        }
    }

    // Inheritance must be acyclic.
    for (const auto& cls : model.classes) {
        std::set<std::string> seen{cls.name};
        const ClassDecl* cur = &cls;
        while (cur->extends) {
            const ClassDecl* parent = model.find_class(*cur->extends);
            if (!seen.insert(parent->name).second)
                fail("inheritance cycle detected through class '" + parent->name + "'");
            cur = parent;
        }
    }

    for (const auto& cls : model.classes) {
        std::set<std::string> members;
        for (const auto& a : cls.attributes) {
            if (!is_identifier(a.name))
                fail(cls.name + ": attribute name '" + a.name + "' is not an identifier");
            if (!members.insert(a.name).second)
                fail(cls.name + ": duplicate member name '" + a.name + "'");
            validate_type_ref(model, a.type, cls.name + "." + a.name, false);
        }
        for (const auto& m : cls.methods) {
            if (!is_identifier(m.name))
                fail(cls.name + ": method name '" + m.name + "' is not an identifier");
            if (!members.insert(m.name).second)
                fail(cls.name + ": duplicate member name '" + m.name + "'");
            const std::string where = cls.name + "." + m.name;
            validate_type_ref(model, m.return_type, where, true);
            std::set<std::string> param_names;
            for (const auto& p : m.params) {
                if (!param_names.insert(p.name).second)
                    fail(where + ": duplicate parameter '" + p.name + "'");
                validate_type_ref(model, p.type, where, false);
            }
            validate_cfg(model, cls, m);
        }
    }
}

}  // namespace citorder

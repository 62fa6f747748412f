#include <sstream>

#include "citorder/error.hpp"
#include "citorder/minij.hpp"

namespace citorder::minij {

namespace {

int precedence(const Expr& e) {
    if (e.kind == Expr::Kind::unary) return 7;
    if (e.kind != Expr::Kind::binary) return 8;
    switch (e.bin_op) {
        case BinOp::logical_or: return 1;
        case BinOp::logical_and: return 2;
        case BinOp::eq:
        case BinOp::ne: return 3;
        case BinOp::lt:
        case BinOp::le:
        case BinOp::gt:
        case BinOp::ge: return 4;
        case BinOp::add:
        case BinOp::sub: return 5;
        case BinOp::mul:
        case BinOp::div:
        case BinOp::mod: return 6;
    }
    return 8;
}

const char* op_text(BinOp op) {
    switch (op) {
        case BinOp::logical_or: return "||";
        case BinOp::logical_and: return "&&";
        case BinOp::eq: return "==";
        case BinOp::ne: return "!=";
        case BinOp::lt: return "<";
        case BinOp::le: return "<=";
        case BinOp::gt: return ">";
        case BinOp::ge: return ">=";
        case BinOp::add: return "+";
        case BinOp::sub: return "-";
        case BinOp::mul: return "*";
        case BinOp::div: return "/";
        case BinOp::mod: return "%";
    }
    return "+";
}

struct Printer {
    std::ostringstream out;
    int indent = 0;

    void pad() {
        for (int i = 0; i < indent; ++i) out << "    ";
    }

    void expr(const Expr& e, int parent_prec = 0, bool right_side = false) {
        const int prec = precedence(e);
        const bool parens =
            prec < parent_prec || (right_side && prec == parent_prec);
        if (parens) out << "(";
        switch (e.kind) {
            case Expr::Kind::int_lit: out << e.int_value; break;
            case Expr::Kind::double_lit: out << e.double_text; break;
            case Expr::Kind::bool_lit: out << (e.bool_value ? "true" : "false"); break;
            case Expr::Kind::var: out << e.name; break;
            case Expr::Kind::field:
                expr(*e.base, 8);
                out << "." << e.name;
                break;
            case Expr::Kind::call:
                if (e.base) {
                    expr(*e.base, 8);
                    out << ".";
                }
                out << e.name << "(";
                for (std::size_t i = 0; i < e.args.size(); ++i) {
                    if (i) out << ", ";
                    expr(*e.args[i], 0);
                }
                out << ")";
                break;
            case Expr::Kind::new_object:
                out << "new " << e.name << "()";
                break;
            case Expr::Kind::binary:
                expr(*e.base, prec, false);
                out << " " << op_text(e.bin_op) << " ";
                expr(*e.rhs, prec, true);
                break;
            case Expr::Kind::unary:
                out << (e.un_op == UnOp::logical_not ? "!" : "-");
                expr(*e.base, 7, true);
                break;
        }
        if (parens) out << ")";
    }

    // Simple statements without the trailing semicolon.
    void simple(const Stmt& s) {
        switch (s.kind) {
            case Stmt::Kind::var_decl:
                out << s.decl_type << " " << s.decl_name;
                if (s.init) {
                    out << " = ";
                    expr(*s.init);
                }
                break;
            case Stmt::Kind::assign:
                expr(*s.target);
                out << " = ";
                expr(*s.value);
                break;
            case Stmt::Kind::expr:
                expr(*s.expr);
                break;
            default:
                throw InternalError("not a simple statement");
        }
    }

    // True when `s` ends in an if without an else, so that a following
    // `else` would rebind to it on reparse.
    static bool dangles(const Stmt& s) {
        switch (s.kind) {
            case Stmt::Kind::if_stmt:
                return s.else_branch ? dangles(*s.else_branch) : true;
            case Stmt::Kind::while_stmt:
            case Stmt::Kind::for_stmt:
                return dangles(*s.body);
            default:
                return false;
        }
    }

    void body_of(const Stmt& s, bool force_braces = false) {
        if (s.kind == Stmt::Kind::block || force_braces) {
            out << " {\n";
            ++indent;
            if (s.kind == Stmt::Kind::block)
                for (const auto& inner : s.stmts) stmt(*inner);
            else
                stmt(s);
            --indent;
            pad();
            out << "}";
        } else {
            out << "\n";
            ++indent;
            stmt(s);
            --indent;
        }
    }

    void stmt(const Stmt& s) {
        switch (s.kind) {
            case Stmt::Kind::var_decl:
            case Stmt::Kind::assign:
            case Stmt::Kind::expr:
                pad();
                simple(s);
                out << ";\n";
                return;
            case Stmt::Kind::empty:
                pad();
                out << ";\n";
                return;
            case Stmt::Kind::return_stmt:
                pad();
                out << "return";
                if (s.expr) {
                    out << " ";
                    expr(*s.expr);
                }
                out << ";\n";
                return;
            case Stmt::Kind::block:
                pad();
                out << "{\n";
                ++indent;
                for (const auto& inner : s.stmts) stmt(*inner);
                --indent;
                pad();
                out << "}\n";
                return;
            case Stmt::Kind::if_stmt: {
                pad();
                out << "if (";
                expr(*s.expr);
                out << ")";
                const bool wrap_then =
                    s.else_branch && dangles(*s.then_branch);
                const bool block_then =
                    s.then_branch->kind == Stmt::Kind::block || wrap_then;
                body_of(*s.then_branch, wrap_then);
                if (s.else_branch) {
                    if (block_then) out << " else";
                    else {
                        pad();
                        out << "else";
                    }
                    body_of(*s.else_branch);
                    if (s.else_branch->kind == Stmt::Kind::block) out << "\n";
                } else if (block_then) {
                    out << "\n";
                }
                return;
            }
            case Stmt::Kind::while_stmt:
                pad();
                out << "while (";
                expr(*s.expr);
                out << ")";
                body_of(*s.body);
                if (s.body->kind == Stmt::Kind::block) out << "\n";
                return;
            case Stmt::Kind::for_stmt:
                pad();
                out << "for (";
                if (s.init_stmt) simple(*s.init_stmt);
                out << "; ";
                expr(*s.expr);
                out << ";";
                if (s.update_stmt) {
                    out << " ";
                    simple(*s.update_stmt);
                }
                out << ")";
                body_of(*s.body);
                if (s.body->kind == Stmt::Kind::block) out << "\n";
                return;
            case Stmt::Kind::switch_stmt:
                pad();
                out << "switch (";
                expr(*s.expr);
                out << ") {\n";
                ++indent;
                for (const auto& arm : s.arms) {
                    pad();
                    if (arm.is_default) out << "default:\n";
                    else out << "case " << arm.value << ":\n";
                    ++indent;
                    for (const auto& inner : arm.body) stmt(*inner);
                    --indent;
                }
                --indent;
                pad();
                out << "}\n";
                return;
        }
    }

    void unit(const Unit& u) {
        for (std::size_t ci = 0; ci < u.classes.size(); ++ci) {
            const ClassDecl& c = u.classes[ci];
            if (ci) out << "\n";
            out << "class " << c.name;
            if (c.extends) out << " extends " << *c.extends;
            out << " {\n";
            ++indent;
            for (const auto& f : c.fields) {
                pad();
                out << f.type << " " << f.name;
                if (f.init) {
                    out << " = ";
                    expr(*f.init);
                }
                out << ";\n";
            }
            for (const auto& m : c.methods) {
                pad();
                out << m.return_type << " " << m.name << "(";
                for (std::size_t i = 0; i < m.params.size(); ++i) {
                    if (i) out << ", ";
                    out << m.params[i].type << " " << m.params[i].name;
                }
                out << ")";
                out << " {\n";
                ++indent;
                for (const auto& inner : m.body->stmts) stmt(*inner);
                --indent;
                pad();
                out << "}\n";
            }
            --indent;
            out << "}\n";
        }
    }
};

}  // namespace

std::string print_expr(const Expr& e) {
    Printer p;
    p.expr(e);
    return p.out.str();
}

std::string print_unit(const Unit& u) {
    Printer p;
    p.unit(u);
    return p.out.str();
}

}  // namespace citorder::minij

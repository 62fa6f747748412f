#include <memory>

#include "citorder/error.hpp"
#include "citorder/minij.hpp"
#include "lexer.hpp"

namespace citorder::minij {

namespace {

struct Parser {
    std::vector<Token> toks;
    std::size_t pos = 0;
    std::string path;

    const Token& peek(std::size_t n = 0) const {
        const std::size_t i = pos + n;
        return toks[i < toks.size() ? i : toks.size() - 1];
    }
    bool at(Tok k) const { return peek().kind == k; }
    bool accept(Tok k) {
        if (!at(k)) return false;
        ++pos;
        return true;
    }

    [[noreturn]] void error(const std::string& msg, const Token& tok) const {
        throw InputError(path + ":" + std::to_string(tok.line) + ":" +
                         std::to_string(tok.col) + ": " + msg);
    }

    Token expect(Tok k, const char* what) {
        if (!at(k)) {
            const Token& t = peek();
            error(std::string("expected ") + what + " before '" +
                      (t.kind == Tok::end ? "end of file" : t.text) + "'",
                  t);
        }
        return toks[pos++];
    }

    bool at_type() const {
        switch (peek().kind) {
            case Tok::kw_int:
            case Tok::kw_double:
            case Tok::kw_boolean:
            case Tok::kw_void:
            case Tok::ident:
                return true;
            default:
                return false;
        }
    }

    std::string parse_type() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::kw_int:
            case Tok::kw_double:
            case Tok::kw_boolean:
            case Tok::kw_void:
            case Tok::ident:
                ++pos;
                return t.text;
            default:
                error("expected a type", t);
        }
    }

    Unit parse_unit() {
        Unit unit;
        unit.path = path;
        while (!at(Tok::end)) unit.classes.push_back(parse_class());
        return unit;
    }

    ClassDecl parse_class() {
        ClassDecl cls;
        cls.line = peek().line;
        expect(Tok::kw_class, "'class'");
        cls.name = expect(Tok::ident, "a class name").text;
        if (accept(Tok::kw_extends))
            cls.extends = expect(Tok::ident, "a class name").text;
        expect(Tok::lbrace, "'{'");
        while (!accept(Tok::rbrace)) {
            if (at(Tok::end)) error("unterminated class body", peek());
            parse_member(cls);
        }
        return cls;
    }

    void parse_member(ClassDecl& cls) {
        const int line = peek().line;
        std::string type = parse_type();
        std::string name = expect(Tok::ident, "a member name").text;
        if (at(Tok::lparen)) {
            MethodDecl m;
            m.line = line;
            m.return_type = std::move(type);
            m.name = std::move(name);
            expect(Tok::lparen, "'('");
            if (!at(Tok::rparen)) {
                do {
                    ParamDecl p;
                    p.type = parse_type();
                    if (p.type == "void") error("parameters cannot be void", peek());
                    p.name = expect(Tok::ident, "a parameter name").text;
                    m.params.push_back(std::move(p));
                } while (accept(Tok::comma));
            }
            expect(Tok::rparen, "')'");
            m.body = parse_block();
            cls.methods.push_back(std::move(m));
            return;
        }
        FieldDecl f;
        f.line = line;
        if (type == "void") error("fields cannot be void", peek());
        f.type = std::move(type);
        f.name = std::move(name);
        if (accept(Tok::assign)) f.init = parse_expr();
        expect(Tok::semi, "';'");
        cls.fields.push_back(std::move(f));
    }

    StmtPtr parse_block() {
        auto s = std::make_unique<Stmt>();
        s->kind = Stmt::Kind::block;
        s->line = peek().line;
        expect(Tok::lbrace, "'{'");
        while (!accept(Tok::rbrace)) {
            if (at(Tok::end)) error("unterminated block", peek());
            s->stmts.push_back(parse_stmt());
        }
        return s;
    }

    StmtPtr parse_stmt() {
        switch (peek().kind) {
            case Tok::lbrace: return parse_block();
            case Tok::kw_if: return parse_if();
            case Tok::kw_while: return parse_while();
            case Tok::kw_for: return parse_for();
            case Tok::kw_switch: return parse_switch();
            case Tok::kw_return: return parse_return();
            case Tok::semi: {
                auto s = std::make_unique<Stmt>();
                s->kind = Stmt::Kind::empty;
                s->line = peek().line;
                ++pos;
                return s;
            }
            default: {
                StmtPtr s = parse_simple();
                expect(Tok::semi, "';'");
                return s;
            }
        }
    }

    // Variable declaration, assignment, or expression statement, without the
    // trailing semicolon (shared with for-loop headers).
    StmtPtr parse_simple() {
        auto s = std::make_unique<Stmt>();
        s->line = peek().line;
        const bool decl = (at(Tok::ident) && peek(1).kind == Tok::ident) ||
                          at(Tok::kw_int) || at(Tok::kw_double) || at(Tok::kw_boolean);
        if (decl) {
            s->kind = Stmt::Kind::var_decl;
            s->decl_type = parse_type();
            s->decl_name = expect(Tok::ident, "a variable name").text;
            if (accept(Tok::assign)) s->init = parse_expr();
            return s;
        }
        ExprPtr e = parse_expr();
        if (accept(Tok::assign)) {
            if (e->kind != Expr::Kind::var && e->kind != Expr::Kind::field)
                error("invalid assignment target", peek());
            s->kind = Stmt::Kind::assign;
            s->target = std::move(e);
            s->value = parse_expr();
            return s;
        }
        s->kind = Stmt::Kind::expr;
        s->expr = std::move(e);
        return s;
    }

    StmtPtr parse_if() {
        auto s = std::make_unique<Stmt>();
        s->kind = Stmt::Kind::if_stmt;
        s->line = peek().line;
        expect(Tok::kw_if, "'if'");
        expect(Tok::lparen, "'('");
        s->expr = parse_expr();
        expect(Tok::rparen, "')'");
        s->then_branch = parse_stmt();
        if (accept(Tok::kw_else)) s->else_branch = parse_stmt();
        return s;
    }

    StmtPtr parse_while() {
        auto s = std::make_unique<Stmt>();
        s->kind = Stmt::Kind::while_stmt;
        s->line = peek().line;
        expect(Tok::kw_while, "'while'");
        expect(Tok::lparen, "'('");
        s->expr = parse_expr();
        expect(Tok::rparen, "')'");
        s->body = parse_stmt();
        return s;
    }

    StmtPtr parse_for() {
        auto s = std::make_unique<Stmt>();
        s->kind = Stmt::Kind::for_stmt;
        s->line = peek().line;
        expect(Tok::kw_for, "'for'");
        expect(Tok::lparen, "'('");
        if (!at(Tok::semi)) s->init_stmt = parse_simple();
        expect(Tok::semi, "';'");
        s->expr = parse_expr();
        expect(Tok::semi, "';'");
        if (!at(Tok::rparen)) s->update_stmt = parse_simple();
        expect(Tok::rparen, "')'");
        s->body = parse_stmt();
        return s;
    }

    StmtPtr parse_switch() {
        auto s = std::make_unique<Stmt>();
        s->kind = Stmt::Kind::switch_stmt;
        s->line = peek().line;
        expect(Tok::kw_switch, "'switch'");
        expect(Tok::lparen, "'('");
        s->expr = parse_expr();
        expect(Tok::rparen, "')'");
        expect(Tok::lbrace, "'{'");
        bool saw_default = false;
        while (!accept(Tok::rbrace)) {
            SwitchArm arm;
            arm.line = peek().line;
            if (accept(Tok::kw_case)) {
                const bool neg = accept(Tok::minus);
                const Token lit = expect(Tok::int_lit, "an integer label");
                arm.value = std::stoll(lit.text) * (neg ? -1 : 1);
            } else if (at(Tok::kw_default)) {
                if (saw_default) error("duplicate default label", peek());
                saw_default = true;
                ++pos;
                arm.is_default = true;
            } else {
                error("expected 'case' or 'default'", peek());
            }
            expect(Tok::colon, "':'");
            while (!at(Tok::kw_case) && !at(Tok::kw_default) && !at(Tok::rbrace)) {
                if (at(Tok::end)) error("unterminated switch", peek());
                arm.body.push_back(parse_stmt());
            }
            s->arms.push_back(std::move(arm));
        }
        if (s->arms.empty()) error("switch needs at least one arm", peek());
        return s;
    }

    StmtPtr parse_return() {
        auto s = std::make_unique<Stmt>();
        s->kind = Stmt::Kind::return_stmt;
        s->line = peek().line;
        expect(Tok::kw_return, "'return'");
        if (!at(Tok::semi)) s->expr = parse_expr();
        expect(Tok::semi, "';'");
        return s;
    }

    ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs, int line) {
        auto e = std::make_unique<Expr>();
        e->kind = Expr::Kind::binary;
        e->line = line;
        e->bin_op = op;
        e->base = std::move(lhs);
        e->rhs = std::move(rhs);
        return e;
    }

    ExprPtr parse_expr() { return parse_or(); }

    ExprPtr parse_or() {
        ExprPtr e = parse_and();
        while (at(Tok::or_or)) {
            const int line = peek().line;
            ++pos;
            e = make_binary(BinOp::logical_or, std::move(e), parse_and(), line);
        }
        return e;
    }

    ExprPtr parse_and() {
        ExprPtr e = parse_equality();
        while (at(Tok::and_and)) {
            const int line = peek().line;
            ++pos;
            e = make_binary(BinOp::logical_and, std::move(e), parse_equality(), line);
        }
        return e;
    }

    ExprPtr parse_equality() {
        ExprPtr e = parse_relational();
        while (at(Tok::eq) || at(Tok::ne)) {
            const BinOp op = at(Tok::eq) ? BinOp::eq : BinOp::ne;
            const int line = peek().line;
            ++pos;
            e = make_binary(op, std::move(e), parse_relational(), line);
        }
        return e;
    }

    ExprPtr parse_relational() {
        ExprPtr e = parse_additive();
        while (at(Tok::lt) || at(Tok::le) || at(Tok::gt) || at(Tok::ge)) {
            BinOp op = BinOp::lt;
            if (at(Tok::le)) op = BinOp::le;
            else if (at(Tok::gt)) op = BinOp::gt;
            else if (at(Tok::ge)) op = BinOp::ge;
            const int line = peek().line;
            ++pos;
            e = make_binary(op, std::move(e), parse_additive(), line);
        }
        return e;
    }

    ExprPtr parse_additive() {
        ExprPtr e = parse_multiplicative();
        while (at(Tok::plus) || at(Tok::minus)) {
            const BinOp op = at(Tok::plus) ? BinOp::add : BinOp::sub;
            const int line = peek().line;
            ++pos;
            e = make_binary(op, std::move(e), parse_multiplicative(), line);
        }
        return e;
    }

    ExprPtr parse_multiplicative() {
        ExprPtr e = parse_unary();
        while (at(Tok::star) || at(Tok::slash) || at(Tok::percent)) {
            BinOp op = BinOp::mul;
            if (at(Tok::slash)) op = BinOp::div;
            else if (at(Tok::percent)) op = BinOp::mod;
            const int line = peek().line;
            ++pos;
            e = make_binary(op, std::move(e), parse_unary(), line);
        }
        return e;
    }

    ExprPtr parse_unary() {
        if (at(Tok::bang) || at(Tok::minus)) {
            auto e = std::make_unique<Expr>();
            e->kind = Expr::Kind::unary;
            e->line = peek().line;
            e->un_op = at(Tok::bang) ? UnOp::logical_not : UnOp::negate;
            ++pos;
            e->base = parse_unary();
            return e;
        }
        return parse_postfix();
    }

    ExprPtr parse_postfix() {
        ExprPtr e = parse_primary();
        while (accept(Tok::dot)) {
            const Token name = expect(Tok::ident, "a member name");
            auto m = std::make_unique<Expr>();
            m->line = name.line;
            m->name = name.text;
            m->base = std::move(e);
            if (accept(Tok::lparen)) {
                m->kind = Expr::Kind::call;
                if (!at(Tok::rparen)) {
                    do {
                        m->args.push_back(parse_expr());
                    } while (accept(Tok::comma));
                }
                expect(Tok::rparen, "')'");
            } else {
                m->kind = Expr::Kind::field;
            }
            e = std::move(m);
        }
        return e;
    }

    ExprPtr parse_primary() {
        const Token& t = peek();
        auto e = std::make_unique<Expr>();
        e->line = t.line;
        switch (t.kind) {
            case Tok::int_lit:
                e->kind = Expr::Kind::int_lit;
                e->int_value = std::stoll(t.text);
                ++pos;
                return e;
            case Tok::double_lit:
                e->kind = Expr::Kind::double_lit;
                e->double_text = t.text;
                ++pos;
                return e;
            case Tok::kw_true:
            case Tok::kw_false:
                e->kind = Expr::Kind::bool_lit;
                e->bool_value = t.kind == Tok::kw_true;
                ++pos;
                return e;
            case Tok::kw_new:
                ++pos;
                e->kind = Expr::Kind::new_object;
                e->name = expect(Tok::ident, "a class name").text;
                expect(Tok::lparen, "'('");
                expect(Tok::rparen, "')'");
                return e;
            case Tok::ident: {
                e->name = t.text;
                ++pos;
                if (accept(Tok::lparen)) {
                    e->kind = Expr::Kind::call;  // unqualified call, null base
                    if (!at(Tok::rparen)) {
                        do {
                            e->args.push_back(parse_expr());
                        } while (accept(Tok::comma));
                    }
                    expect(Tok::rparen, "')'");
                } else {
                    e->kind = Expr::Kind::var;
                }
                return e;
            }
            case Tok::lparen: {
                ++pos;
                ExprPtr inner = parse_expr();
                expect(Tok::rparen, "')'");
                return inner;
            }
            default:
                error("expected an expression", t);
        }
    }
};

}  // namespace

Unit parse_unit(const std::string& source, const std::string& path) {
    Parser p;
    p.toks = lex(source, path);
    p.path = path;
    Unit unit = p.parse_unit();
    return unit;
}

}  // namespace citorder::minij

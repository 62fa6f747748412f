#pragma once

// Random syntactically valid minij sources for parser round-trip tests.
// Identifiers are arbitrary; the output is meant for parsing, not lowering.

#include <cstdint>
#include <random>
#include <string>

namespace testutil {

class SourceGen {
public:
    explicit SourceGen(std::uint64_t seed) : rng_(seed) {}

    std::string unit() {
        std::string out;
        const int classes = 1 + pick(2);
        for (int i = 0; i < classes; ++i) out += class_decl();
        return out;
    }

private:
    std::mt19937_64 rng_;
    int depth_ = 0;

    int pick(int n) { return static_cast<int>(rng_() % static_cast<unsigned>(n)); }
    bool chance(int percent) { return pick(100) < percent; }

    std::string ident() {
        static const char* names[] = {"a", "b", "cnt", "item", "value", "next",
                                      "node", "tmp", "x", "y", "flag", "total"};
        return names[pick(12)];
    }
    std::string type_name() {
        static const char* names[] = {"int", "double", "boolean", "Widget", "Node"};
        return names[pick(5)];
    }
    std::string literal() {
        switch (pick(4)) {
            case 0: return std::to_string(pick(100));
            case 1: return std::to_string(pick(50)) + "." + std::to_string(pick(10));
            case 2: return "true";
            default: return "false";
        }
    }

    std::string expr() {
        ++depth_;
        std::string out = depth_ > 4 ? atom() : compound();
        --depth_;
        return out;
    }
    std::string atom() {
        switch (pick(4)) {
            case 0: return literal();
            case 1: return ident();
            case 2: return ident() + "." + ident();
            default: return "new " + class_name() + "()";
        }
    }
    std::string compound() {
        switch (pick(8)) {
            case 0: return atom();
            case 1: return "(" + expr() + ")";
            case 2: return "!" + expr();
            case 3: return "-" + expr();
            case 4: {
                static const char* ops[] = {"+",  "-",  "*",  "/", "%", "<",
                                            "<=", ">",  ">=", "==", "!=",
                                            "&&", "||"};
                return expr() + " " + ops[pick(13)] + " " + expr();
            }
            case 5: return ident() + "(" + args() + ")";
            case 6: return atom() + "." + ident() + "(" + args() + ")";
            default: return atom();
        }
    }
    std::string args() {
        const int n = pick(3);
        std::string out;
        for (int i = 0; i < n; ++i) {
            if (i) out += ", ";
            out += expr();
        }
        return out;
    }

    std::string stmt(int indent) {
        const std::string pad(static_cast<std::size_t>(indent), ' ');
        ++depth_;
        std::string out;
        switch (depth_ > 3 ? pick(4) : pick(8)) {
            case 0: out = pad + ident() + " = " + expr() + ";\n"; break;
            case 1: out = pad + type_name() + " " + ident() + " = " + expr() + ";\n"; break;
            case 2: out = pad + expr() + ";\n"; break;
            case 3: out = pad + "return " + (chance(50) ? expr() + ";" : ";") + "\n"; break;
            case 4:
                out = pad + "if (" + expr() + ")" + block(indent) +
                      (chance(50) ? pad + "else" + block(indent) : "");
                break;
            case 5: out = pad + "while (" + expr() + ")" + block(indent); break;
            case 6:
                out = pad + "for (" + type_name() + " " + ident() + " = " + expr() +
                      "; " + expr() + "; " + ident() + " = " + expr() + ")" +
                      block(indent);
                break;
            default: {
                out = pad + "switch (" + expr() + ") {\n";
                const int arms = 1 + pick(3);
                for (int i = 0; i < arms; ++i) {
                    out += pad + "case " + std::to_string(i) + ":\n";
                    out += stmt(indent + 4);
                }
                if (chance(50)) out += pad + "default:\n" + stmt(indent + 4);
                out += pad + "}\n";
                break;
            }
        }
        --depth_;
        return out;
    }

    std::string block(int indent) {
        std::string out = " {\n";
        const int n = pick(3);
        for (int i = 0; i < n; ++i) out += stmt(indent + 4);
        out += std::string(static_cast<std::size_t>(indent), ' ') + "}\n";
        return out;
    }

    std::string class_name() {
        return (chance(50) ? "Widget" : "Node") + std::to_string(pick(100));
    }

    std::string class_decl() {
        std::string out = "class " + class_name();
        if (chance(25)) out += " extends " + class_name();
        out += " {\n";
        const int fields = pick(3);
        for (int i = 0; i < fields; ++i) {
            out += "    " + type_name() + " " + ident();
            if (chance(50)) out += " = " + expr();
            out += ";\n";
        }
        const int methods = 1 + pick(3);
        for (int i = 0; i < methods; ++i) {
            out += "    " + (chance(30) ? type_name() : std::string("void")) + " " +
                   ident() + std::to_string(i) + "(";
            const int params = pick(3);
            for (int p = 0; p < params; ++p) {
                if (p) out += ", ";
                out += type_name() + " p" + std::to_string(p);
            }
            out += ") {\n";
            const int stmts = pick(4);
            depth_ = 0;
            for (int s = 0; s < stmts; ++s) out += stmt(8);
            out += "    }\n";
        }
        out += "}\n";
        return out;
    }
};

}  // namespace testutil

#include "lexer.hpp"

#include <cctype>
#include <map>

#include "citorder/error.hpp"

namespace citorder::minij {

namespace {

const std::map<std::string, Tok>& keywords() {
    static const std::map<std::string, Tok> table = {
        {"class", Tok::kw_class},     {"extends", Tok::kw_extends},
        {"if", Tok::kw_if},           {"else", Tok::kw_else},
        {"while", Tok::kw_while},     {"for", Tok::kw_for},
        {"switch", Tok::kw_switch},   {"case", Tok::kw_case},
        {"default", Tok::kw_default}, {"return", Tok::kw_return},
        {"new", Tok::kw_new},         {"true", Tok::kw_true},
        {"false", Tok::kw_false},     {"int", Tok::kw_int},
        {"double", Tok::kw_double},   {"boolean", Tok::kw_boolean},
        {"void", Tok::kw_void},
    };
    return table;
}

}  // namespace

std::vector<Token> lex(const std::string& source, const std::string& path) {
    std::vector<Token> out;
    std::size_t i = 0;
    int line = 1;
    int col = 1;

    auto fail = [&](const std::string& msg) -> void {
        throw InputError(path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                         ": " + msg);
    };
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (source[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto push = [&](Tok kind, std::size_t len) {
        out.push_back({kind, source.substr(i, len), line, col});
        advance(len);
    };

    while (i < source.size()) {
        const char c = source[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < source.size() && source[i + 1] == '/') {
            while (i < source.size() && source[i] != '\n') advance(1);
            continue;
        }
        if (c == '/' && i + 1 < source.size() && source[i + 1] == '*') {
            advance(2);
            while (i + 1 < source.size() && !(source[i] == '*' && source[i + 1] == '/'))
                advance(1);
            if (i + 1 >= source.size()) fail("unterminated block comment");
            advance(2);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t len = 1;
            while (i + len < source.size() &&
                   (std::isalnum(static_cast<unsigned char>(source[i + len])) ||
                    source[i + len] == '_'))
                ++len;
            const std::string word = source.substr(i, len);
            auto kw = keywords().find(word);
            push(kw == keywords().end() ? Tok::ident : kw->second, len);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t len = 1;
            while (i + len < source.size() &&
                   std::isdigit(static_cast<unsigned char>(source[i + len])))
                ++len;
            bool is_double = false;
            if (i + len + 1 < source.size() && source[i + len] == '.' &&
                std::isdigit(static_cast<unsigned char>(source[i + len + 1]))) {
                is_double = true;
                ++len;
                while (i + len < source.size() &&
                       std::isdigit(static_cast<unsigned char>(source[i + len])))
                    ++len;
            }
            push(is_double ? Tok::double_lit : Tok::int_lit, len);
            continue;
        }
        auto two = [&](char a, char b) {
            return c == a && i + 1 < source.size() && source[i + 1] == b;
        };
        if (two('=', '=')) { push(Tok::eq, 2); continue; }
        if (two('!', '=')) { push(Tok::ne, 2); continue; }
        if (two('<', '=')) { push(Tok::le, 2); continue; }
        if (two('>', '=')) { push(Tok::ge, 2); continue; }
        if (two('&', '&')) { push(Tok::and_and, 2); continue; }
        if (two('|', '|')) { push(Tok::or_or, 2); continue; }
        switch (c) {
            case '{': push(Tok::lbrace, 1); continue;
            case '}': push(Tok::rbrace, 1); continue;
            case '(': push(Tok::lparen, 1); continue;
            case ')': push(Tok::rparen, 1); continue;
            case ';': push(Tok::semi, 1); continue;
            case ',': push(Tok::comma, 1); continue;
            case ':': push(Tok::colon, 1); continue;
            case '.': push(Tok::dot, 1); continue;
            case '=': push(Tok::assign, 1); continue;
            case '<': push(Tok::lt, 1); continue;
            case '>': push(Tok::gt, 1); continue;
            case '!': push(Tok::bang, 1); continue;
            case '+': push(Tok::plus, 1); continue;
            case '-': push(Tok::minus, 1); continue;
            case '*': push(Tok::star, 1); continue;
            case '/': push(Tok::slash, 1); continue;
            case '%': push(Tok::percent, 1); continue;
            default: fail(std::string("unexpected character '") + c + "'");
        }
    }
    out.push_back({Tok::end, "", line, col});
    return out;
}

}  // namespace citorder::minij

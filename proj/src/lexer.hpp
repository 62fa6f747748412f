#pragma once

#include <string>
#include <vector>

namespace citorder::minij {

enum class Tok {
    end,
    ident,
    int_lit,
    double_lit,
    kw_class,
    kw_extends,
    kw_if,
    kw_else,
    kw_while,
    kw_for,
    kw_switch,
    kw_case,
    kw_default,
    kw_return,
    kw_new,
    kw_true,
    kw_false,
    kw_int,
    kw_double,
    kw_boolean,
    kw_void,
    lbrace,
    rbrace,
    lparen,
    rparen,
    semi,
    comma,
    colon,
    dot,
    assign,
    eq,
    ne,
    lt,
    le,
    gt,
    ge,
    and_and,
    or_or,
    bang,
    plus,
    minus,
    star,
    slash,
    percent,
};

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

std::vector<Token> lex(const std::string& source, const std::string& path);

}  // namespace citorder::minij

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace citorder::minij {

enum class BinOp { logical_or, logical_and, eq, ne, lt, le, gt, ge, add, sub, mul, div, mod };
enum class UnOp { logical_not, negate };

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
    enum class Kind {
        int_lit,
        double_lit,
        bool_lit,
        var,
        field,      // base.name
        call,       // base.name(args) or name(args) with null base
        new_object, // new Name()
        binary,
        unary,
    };

    Kind kind;
    int line = 0;
    long long int_value = 0;
    std::string double_text;  // double literals keep their source spelling
    bool bool_value = false;
    std::string name;
    ExprPtr base;  // field/call base, binary lhs, unary operand
    ExprPtr rhs;   // binary rhs
    std::vector<ExprPtr> args;
    BinOp bin_op = BinOp::add;
    UnOp un_op = UnOp::negate;
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct SwitchArm {
    bool is_default = false;
    long long value = 0;
    std::vector<StmtPtr> body;
    int line = 0;
};

struct Stmt {
    enum class Kind {
        var_decl,
        assign,
        expr,
        if_stmt,
        while_stmt,
        for_stmt,
        switch_stmt,
        return_stmt,
        block,
        empty,
    };

    Kind kind;
    int line = 0;
    std::string decl_type;  // var_decl
    std::string decl_name;
    ExprPtr init;
    ExprPtr target;  // assign
    ExprPtr value;
    ExprPtr expr;  // expr stmt, condition, scrutinee, return value
    StmtPtr init_stmt;    // for
    StmtPtr update_stmt;  // for
    StmtPtr then_branch;  // if
    StmtPtr else_branch;
    StmtPtr body;  // while/for
    std::vector<StmtPtr> stmts;  // block
    std::vector<SwitchArm> arms;  // switch
};

struct FieldDecl {
    std::string type;
    std::string name;
    ExprPtr init;
    int line = 0;
};

struct ParamDecl {
    std::string type;
    std::string name;
};

struct MethodDecl {
    std::string return_type;
    std::string name;
    std::vector<ParamDecl> params;
    StmtPtr body;  // always a block
    int line = 0;
};

struct ClassDecl {
    std::string name;
    std::optional<std::string> extends;
    std::vector<FieldDecl> fields;
    std::vector<MethodDecl> methods;
    int line = 0;
};

// One parsed source file. A unit may declare any number of classes; a program
// may span several units, which lets each class keep its own line numbering.
struct Unit {
    std::string path;
    std::vector<ClassDecl> classes;
};

}  // namespace citorder::minij

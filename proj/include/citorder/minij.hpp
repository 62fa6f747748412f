#pragma once

#include <string>
#include <vector>

#include "citorder/minij_ast.hpp"
#include "citorder/model.hpp"

namespace citorder::minij {

// Parses one source file. Syntax errors throw InputError with path:line:col.
Unit parse_unit(const std::string& source, const std::string& path);

// Canonical source form; parse_unit(print_unit(u)) prints back identically.
std::string print_unit(const Unit& unit);
std::string print_expr(const Expr& expr);

// Resolves names across all units and builds the program model, including a
// control flow graph per method. The result passes validate().
ProgramModel lower(const std::vector<Unit>& units, const std::string& model_name);

}  // namespace citorder::minij

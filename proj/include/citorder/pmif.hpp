#pragma once

#include <string>

#include "citorder/model.hpp"

namespace citorder {

// PMIF is the JSON interchange format for program models. Loading parses,
// checks the schema strictly (unknown keys are rejected), and validates the
// resulting model. Saving emits a document that loads back to an equal model.
ProgramModel load_pmif(const std::string& json_text);
std::string save_pmif(const ProgramModel& model);

ProgramModel load_pmif_file(const std::string& path);
void save_pmif_file(const ProgramModel& model, const std::string& path);

}  // namespace citorder

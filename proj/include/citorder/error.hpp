#pragma once

#include <stdexcept>
#include <string>

namespace citorder {

// Error categories map onto CLI exit codes: input 1, analysis 2, internal 3.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input: schema violations, parse errors, unresolved references.
class InputError : public Error {
public:
    using Error::Error;
};

// The input was well formed but the analysis could not finish.
class AnalysisError : public Error {
public:
    using Error::Error;
};

// A broken invariant inside the library itself.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace citorder

#pragma once

#include <stdexcept>
#include <string>

#include "pbvp/conditions.hpp"
#include "pbvp/problems.hpp"
#include "pbvp/solver.hpp"

namespace pbvp {

/// Problem-file or schema failure; the message carries the source name
/// and, for parse failures, a line:column location.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LoadedProblem {
    BuiltProblem built;
    bool has_bracket = false;  // custom problems may omit alpha/beta
    int n = 256;
};

/// Parses a JSON problem description.  Families: pendulum, singular,
/// duffing (coefficients as numbers, expression strings in t, or
/// arrays-on-grid; nonlinearities as expressions or named presets) and
/// custom (f as an expression in t, x, y with an optional alpha/beta pair).
/// n_override > 0 replaces the file's grid size; array coefficients must
/// match whichever size wins.
LoadedProblem load_problem_text(const std::string& text, const std::string& source_name,
                                int n_override = 0);
LoadedProblem load_problem_file(const std::string& path, int n_override = 0);

// Deterministic JSON writers; every float carries 17 significant digits.
std::string certificate_to_json(const Certificate& cert, const std::string& label);
std::string solve_result_to_json(const SolveResult& res, const std::string& label);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace pbvp

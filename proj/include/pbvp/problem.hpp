#pragma once

#include <functional>
#include <optional>
#include <string>

namespace pbvp {

using Evaluator = std::function<double(double t, double x, double y)>;

/// Right hand side of -x'' = f(t, x, x') on [0,1] with periodic boundary
/// conditions, plus optional analytic partials and an optional additive
/// split f = f1 + f2 used by the growth-condition check.
///
/// When domain_floor is set the stored f already contains the constant-in-x
/// extension below the floor, so it is safe to evaluate anywhere; the floor
/// records where the original equation begins.
struct ProblemDef {
    Evaluator f;
    Evaluator fx;  // null => finite differences
    Evaluator fy;
    Evaluator f1;  // optional split, f = f1 + f2
    Evaluator f2;
    std::optional<double> domain_floor;
    std::string label = "problem";

    double eval(double t, double x, double y) const;
    double dfdx(double t, double x, double y) const;
    double dfdy(double t, double x, double y) const;
    bool has_split() const { return static_cast<bool>(f1) && static_cast<bool>(f2); }
};

}  // namespace pbvp

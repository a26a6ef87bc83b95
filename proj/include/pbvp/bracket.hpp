#pragma once

#include <functional>

#include "pbvp/grid_function.hpp"

namespace pbvp {

/// Candidate lower/upper solution pair on a common grid.  Both functions
/// carry first and second derivative arrays; only the values are required
/// to match at the endpoints.  r1, r2 are the derivative jumps
///   r1 = alpha'(0) - alpha'(1),  r2 = beta'(1) - beta'(0).
struct Bracket {
    GridFunction alpha;
    GridFunction beta;
    double r1 = 0;
    double r2 = 0;
};

/// Validates grids (matching n, derivative and second arrays present,
/// endpoint value agreement) and fills in r1, r2.
Bracket make_bracket(GridFunction alpha, GridFunction beta);

/// Bracket from analytic closures for the values and both derivatives.
Bracket bracket_from_closures(int n, const std::function<double(double)>& a,
                              const std::function<double(double)>& ap,
                              const std::function<double(double)>& app,
                              const std::function<double(double)>& b,
                              const std::function<double(double)>& bp,
                              const std::function<double(double)>& bpp);

/// Bracket from value-only grids; derivatives filled by differentiate().
Bracket bracket_from_grids(const GridFunction& alpha, const GridFunction& beta);

}  // namespace pbvp

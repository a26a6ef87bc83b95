#pragma once

#include "pbvp/grid_function.hpp"
#include "pbvp/kernel.hpp"
#include "pbvp/problem.hpp"
#include "pbvp/solver.hpp"

namespace pbvp {

struct IvpResult {
    double x1 = 0;
    double v1 = 0;
    GridFunction trajectory;  // node values and slopes, one node per step
};

/// Classical fourth-order Runge-Kutta on x'' = -f(t, x, x') from
/// (x0, v0) over [0,1].  Throws when the trajectory leaves the finite
/// range.
IvpResult integrate_ivp(const ProblemDef& prob, double x0, double v0, int steps);

/// Damped Newton iteration on the periodicity defect
/// (x(1)-x0, x'(1)-v0) with a finite-difference Jacobian.  Integrates
/// with 16 n steps per shot and subsamples the converged trajectory onto
/// the n-grid (method "shooting").  Deliberately shares no code with the
/// kernel-quadrature solve path.
SolveResult shoot_periodic(const ProblemDef& prob, double x0, double v0, int n,
                           double tol = 1e-12, int max_iter = 60);

/// Independent kernel check: integrates the two fundamental solutions of
/// u'' = a u - b u', assembles the periodic initial data from the 2x2
/// periodicity system, and returns the max deviation from the closed-form
/// kernel on a 33-point grid.
double verify_h_by_ivp(const LinearParams& p, int steps = 4096);

}  // namespace pbvp

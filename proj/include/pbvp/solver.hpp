#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pbvp/bracket.hpp"
#include "pbvp/grid_function.hpp"
#include "pbvp/kernel.hpp"
#include "pbvp/operator_t.hpp"
#include "pbvp/problem.hpp"

namespace pbvp {

enum class SolveMode { automatic, fixed_point, newton, continuation };

struct SolveConfig {
    int n = 256;
    double tol = 1e-8;  // absolute residual target
    int max_iter = 500;
    double relaxation = 1.0;                 // fixed point mixing weight in (0,1]
    SolveMode mode = SolveMode::automatic;
    std::optional<double> shift_a, shift_b;  // override the automatic shift
    std::vector<double> eps_schedule = {1e-1, 1e-2, 1e-3, 0.0};
};

struct SolveResult {
    GridFunction x;  // with derivative
    double residual = 0;
    int iterations = 0;
    std::vector<double> history;  // residual per iteration
    bool converged = false;
    std::string method;
    double clamp_activity = 0;  // fraction of nodes truncated in the last stage
    // Bracket membership of the solution, filled when a bracket is known:
    // alpha <= x <= beta and the slope fan
    // alpha' - N (x-alpha) <= x' <= beta' + N (beta-x).
    std::optional<bool> in_band;
    std::optional<bool> slopes_ok;
    std::optional<double> band_margin;
};

/// Fixed point iteration left the contraction regime.  history holds the
/// residuals up to the blow-up so the failure can be diagnosed.
class SolveDivergence : public std::runtime_error {
public:
    SolveDivergence(const std::string& what, std::vector<double> hist)
        : std::runtime_error(what), history(std::move(hist)) {}
    std::vector<double> history;
};

/// Summary of the certified hypothesis quantities feeding pick_shift.
struct HypoSummary {
    double ell = 0;   // tube Lipschitz bound
    double mu = 0;    // tube radius
    double c = 0;     // attained max of c(t) (beta - alpha), must be < 1
    double L = 0;     // linear growth coefficient
    double Khat = 0;  // offset constant over the band
};

struct ShiftChoice {
    double a = 0;
    double b = 0;
    double N = 0;
    double N0 = 0;
    double a0 = 0;
    double C_N = 0;  // Lipschitz estimate over the slope fan E_N
};

/// Constructive shift selection:
///   N  = max(N0, ell + 1, (Khat + L mu) / ((1 - c) mu))
///   b  = -a/N + N   (so the negative root is exactly -N)
///   a  = max(a0, (N + C_N + ell) N)
/// N0 is the smallest power of two making beta - alpha + (beta'-alpha')/N
/// positive on the grid; a0 the smallest power of two making
/// a (beta-alpha) - b (beta'-alpha') + f(t,beta,beta') - f(t,alpha,alpha')
/// nonnegative; C_N an (E2)-style slope maximum over E_N on a 32^3 grid.
/// Throws on scan exhaustion.
ShiftChoice pick_shift(const ProblemDef& prob, const Bracket& br, const HypoSummary& hypo);

/// Shift heuristic for plain solving (not certification): a = 1 + Lipschitz
/// estimate of f near eta0 so the iteration map has a chance of contracting;
/// b = 0.
LinearParams default_shift(const ProblemDef& prob, const GridFunction& eta0);

GridFunction constant_guess(int n, double value);

/// The band ceiling beta - r2 h shifted by Delta/a; the default initial
/// iterate (an exhibited member of the invariant set).
GridFunction default_eta0(const Bracket& br, const LinearParams& p, double Delta = 0);

/// Damped Picard iteration x <- (1-w) x + w T x with the shifted integral
/// operator; stops when the defect residual reaches cfg.tol and returns the
/// best iterate seen.  Throws SolveDivergence when the residual exceeds 10x
/// its best value.
SolveResult solve_fixed_point(const ProblemDef& prob, const LinearParams& p,
                              const GridFunction& eta0, const SolveConfig& cfg);

/// Damped Newton on the periodic collocation system
///   D2 x + f(t, x, D1 x) = 0
/// with 4th order difference stencils.  The Jacobian is pentadiagonal up to
/// six wrap-around entries; solved by a banded factorization plus a rank-4
/// correction, falling back to a dense solve when the banded part is
/// singular.  An exactly singular Jacobian at the initial iterate (constant
/// guesses can zero the mean mode) is retried from a nudged start.
SolveResult solve_newton(const ProblemDef& prob, const SolveConfig& cfg,
                         const GridFunction* eta0 = nullptr);

/// Continuation in the strictness parameter eps: each stage solves the
/// truncated problem (x clamped into [alpha, beta]) perturbed by the linear
/// pull gamma_eps = (1 - 2 (x - alpha)/(beta - alpha)) eps, warm starting
/// Newton from the previous stage; the final stage eps = 0 is the original
/// equation wherever the solution stays inside the band.  clamp_activity
/// reports how often the final solution left it.
SolveResult solve_continuation(const ProblemDef& prob, const Bracket& br,
                               const SolveConfig& cfg);

/// gamma_eps above, exposed for tests: +eps at x = alpha(t), -eps at beta(t).
double continuation_pull(double eps, double x, double alpha, double beta);

/// Fixed point (with relaxation backoff), then Newton, then continuation
/// when a bracket is available.  Returns the first converged result.
SolveResult solve_auto(const ProblemDef& prob, const SolveConfig& cfg,
                       const Bracket* br = nullptr);

/// min over nodes of min(x - alpha, beta - x).
double band_margin(const GridFunction& x, const Bracket& br);

/// Fills in_band / slopes_ok / band_margin on a result given the bracket
/// and the slope fan constant N.
void check_membership(SolveResult& res, const Bracket& br, double N);

}  // namespace pbvp

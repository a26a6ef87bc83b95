#pragma once

#include <functional>
#include <string>

#include "pbvp/bracket.hpp"
#include "pbvp/grid_function.hpp"
#include "pbvp/problem.hpp"

namespace pbvp {

/// Scalar nonlinearity with an optional analytic derivative; an empty df
/// falls back to central differences where a slope is needed.
struct Curve {
    std::function<double(double)> f;
    std::function<double(double)> df;
};

/// Forced pendulum with the curvature-style velocity factor,
///   f(t,x,y) = (1 + y^2)^{3/2} (mu(t) sin x - ell(t,x) y - e(t)),
/// banded between the constant levels pi/2 and 3 pi/2.
struct PendulumSpec {
    GridFunction mu;  // restoring amplitude, mu(t) >= |e(t)|
    GridFunction e;   // forcing
    std::function<double(double, double)> ell;  // friction coefficient ell(t, x)
    double r = 1;     // r * min_x ell(t,x) >= mu(t) on the band
    double d = 0;     // velocity-factor bound; 0 = derive from r and max ell
};

/// Attractive singular forcing x'' + p(t) x^{-lambda} = e(t); the
/// nonlinearity is frozen below the positive floor c.
struct SingularSpec {
    GridFunction p;     // p(t) > 0
    GridFunction e;     // mean(e) > 0 and C p(t) >= e(t)
    double lambda = 1;  // exponent, > 0
    double C = 1;       // frozen-branch cap, x^{-lambda} <= C at the floor
    double c = 0;       // floor; 0 = derive as C^(-1/lambda)
};

enum class DuffingVariant { example2, example3 };

/// x'' + p(t) g(x) - q(t) h(x') = e(t); g frozen below the floor c.
/// example2 assumes h >= 0 with subquadratic decay to the left; example3
/// lets h change sign under the level bound h > -mean(e)/mean(q) near 0.
struct DuffingSpec {
    GridFunction p, q, e;  // q >= 0 everywhere
    Curve g;               // on (0, infinity)
    Curve h;               // on R, h(0) = 0
    double c = 0;          // lower level, needs g(c) p(t) >= e(t); required > 0
    DuffingVariant variant = DuffingVariant::example3;
    double n1 = 0;         // example3 slack level; 0 = pick automatically
    double m = 0;          // upper level; 0 = pick automatically
};

/// Assembled instance: the standard-form problem, its bracket, and the
/// certification constants the construction guarantees.
struct BuiltProblem {
    ProblemDef prob;
    Bracket bracket;
    double shift_a = 0;  // prescribed linearization shift, valid when has_shift
    double shift_b = 0;
    bool has_shift = false;
    double delta = 0;        // defect-comparison slack
    double Delta = 0;        // envelope slack
    double growth_c = 0;     // quadratic growth weight (constant in t)
    int growth_variant = 0;  // 1 or 2 for split problems, 0 when unused
    std::string family;
};

// Standard-form right sides.  Each validates its spec's invariants.
ProblemDef pendulum_to_standard(const PendulumSpec& spec);
ProblemDef singular_to_standard(const SingularSpec& spec);
ProblemDef duffing_to_standard(const DuffingSpec& spec);

/// Upper level m + n t(1-t) minus the double-integral response to e, with
/// n = mean(e)/2; carries analytic first and second derivatives
/// (second = -2n + e).  The derivative jump at the endpoints is zero.
GridFunction build_beta_example1(const GridFunction& e, double m);
GridFunction build_beta_example1(const SingularSpec& spec, double m);

/// Picks d = max(c, (p_max / mean(e))^{1/lambda}) and then m so that
/// min beta >= d.
double choose_m_example1(const SingularSpec& spec);

/// Upper level from the load w = n1 q + n2 p - e with n2 chosen so the
/// load has zero mean; second = -w.  Enforces |beta'| <= 2 mean(e).
GridFunction build_beta_example3(const DuffingSpec& spec, double n1, double m);

/// Default slack level: the midpoint rule capped at mean(e)/(2 mean(q)),
/// kept above the scanned maximum of -h on |y| <= 2 mean(e).
double default_n1(const DuffingSpec& spec);

double choose_m_example2(const DuffingSpec& spec);
double choose_m_example3(const DuffingSpec& spec, double n1);

/// Smallest admissible velocity-factor bound (1 + pi^2 r^2)^{3/2} max ell.
double pendulum_default_d(const PendulumSpec& spec);

// Full instances with bracket and certification constants attached.
BuiltProblem build_pendulum(const PendulumSpec& spec);
BuiltProblem build_singular(const SingularSpec& spec);
BuiltProblem build_duffing(const DuffingSpec& spec);

// Nonlinearity presets.
Curve preset_g_inverse_power(double lambda);
Curve preset_h_two_branch(double lambda1, double lambda2);
Curve preset_h_odd_poly(double mu, double nu, int k);

}  // namespace pbvp

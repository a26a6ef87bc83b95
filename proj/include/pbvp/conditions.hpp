#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pbvp/bracket.hpp"
#include "pbvp/grid_function.hpp"
#include "pbvp/kernel.hpp"
#include "pbvp/problem.hpp"

namespace pbvp {

struct Witness {
    double t = 0;
    std::optional<int> eta_index;
    std::optional<double> z;
};

/// One verified inequality.  margin is the minimum slack found; the check
/// passes when margin >= -atol with atol = 1e-8 * (1 + scale of the terms
/// involved).  method records how exhaustive the check was ("grid",
/// "sampled", "sampled asymptotic").
struct ConditionRecord {
    std::string name;
    bool pass = false;
    double margin = 0;
    Witness witness;
    std::string method = "grid";
    std::string notes;
};

struct Certificate {
    std::vector<ConditionRecord> records;
    std::map<std::string, double> params;
    bool all_pass() const;
    const ConditionRecord* find(const std::string& name) const;
};

/// Comparison band spanned by
///   alpha1bar = alpha + r1 h - Delta/a,   beta1bar = beta - r2 h + Delta/a
/// together with the admissible slope range
///   psi1(eta,t) = alpha1bar' - k0 (eta - alpha1bar)
///   psi2(eta,t) = beta1bar'  + k0 (beta1bar - eta).
/// Both band edges are C1-periodic by construction.
struct Envelope {
    GridFunction alpha1bar;  // with derivative
    GridFunction beta1bar;
    double k0 = 0;
    double Delta = 0;

    double psi1(int i, double eta) const {
        return alpha1bar.derivative[i] - k0 * (eta - alpha1bar.values[i]);
    }
    double psi2(int i, double eta) const {
        return beta1bar.derivative[i] + k0 * (beta1bar.values[i] - eta);
    }
};

/// delta is the defect allowance certified by verify_E0; requires
/// Delta >= delta/2 so the band is nonempty whenever that check passed.
Envelope build_envelope(const Bracket& br, const LinearParams& p, double Delta, double delta);

/// Worst constraint slack of eta as a band member (band and slope
/// inequalities); >= -atol means member.
double member_margin(const Envelope& env, const GridFunction& eta);

/// Deterministic member sample: beta1bar, alpha1bar, fixed convex
/// combinations, those same levels re-tagged with the extreme admissible
/// slopes psi1 and psi2 (fan-edge members), then smoothed random profiles
/// whose slopes are clamped into [psi1, psi2] and re-integrated with the
/// periodic projection.
/// Every returned member is re-verified; random candidates that fail are
/// replaced by convex combinations (always members).
std::vector<GridFunction> sample_envelope(const Envelope& env, int count, unsigned seed);

/// Lower-solution defect f(t,alpha,alpha') + alpha'' >= 0.
ConditionRecord check_lower(const ProblemDef& prob, const GridFunction& alpha);
/// Upper-solution defect -beta'' - f(t,beta,beta') >= 0.
ConditionRecord check_upper(const ProblemDef& prob, const GridFunction& beta);

/// f(t,beta,beta') - f(t,alpha,alpha') >= -a (beta-alpha) + b (beta'-alpha') - delta.
ConditionRecord verify_E0(const ProblemDef& prob, const Bracket& br, const LinearParams& p,
                          double delta);

/// Two-sided invariance inequalities against the band members in `samples`
/// (method "sampled"):
///   f(t,eta,eta') + alpha'' >= -a (eta-alpha) + b (eta'-alpha') - Delta
///   f(t,eta,eta') + beta''  <=  a (beta-eta)  + b (beta'-eta')  + Delta
ConditionRecord verify_E1(const ProblemDef& prob, const Bracket& br, const LinearParams& p,
                          double Delta, const std::vector<GridFunction>& samples);

/// Variant with f(t,alpha,alpha') / f(t,beta,beta') in place of the
/// defect bounds (implies the plain version when alpha, beta bracket).
ConditionRecord verify_E1prime(const ProblemDef& prob, const Bracket& br, const LinearParams& p,
                               double Delta, const std::vector<GridFunction>& samples);

struct E2Result {
    double ell = 0;       // max |f_x| + |f_y| over both tubes
    bool nonsmooth = false;
    ConditionRecord record;  // r1 >= 0, r2 >= 0, alpha <= beta
};

/// Lipschitz estimate over the tubes |x - gamma(t)| <= mu, |y - gamma'(t)| <= mu
/// around gamma = alpha and beta, using analytic partials when available and
/// two-scale central differences otherwise (scale disagreement sets the
/// nonsmooth flag).  Throws when f is not finite somewhere in the tube.
E2Result estimate_E2(const ProblemDef& prob, const Bracket& br, double mu,
                     int nx = 9, int ny = 9);

double default_mu(const Bracket& br);

/// One-sided quadratic growth bounds on a (t, x, z) grid over
/// t in [0,1], x in [alpha(t), beta(t)], z in [0, z_max]:
///   f(t,x,alpha'-z) - f(t,x,alpha') >= -c(t) z^2 - L z - K
///   f(t,x,beta')    - f(t,x,beta'+z) >= -c(t) z^2 - L z - K
/// Also reports the attained c := max c(t)(beta-alpha), which must stay < 1.
ConditionRecord verify_E3(const ProblemDef& prob, const Bracket& br, const GridFunction& c,
                          double L, double K, double z_max, int gt = 64, int gx = 64,
                          int gz = 64);

/// Mirror-image bounds (slopes probed on the other side):
///   f(t,x,alpha') - f(t,x,alpha'+z) <= c(t) z^2 + L z + K
///   f(t,x,beta'-z) - f(t,x,beta')   <= c(t) z^2 + L z + K
ConditionRecord verify_E3prime(const ProblemDef& prob, const Bracket& br, const GridFunction& c,
                               double L, double K, double z_max, int gt = 64, int gx = 64,
                               int gz = 64);

double default_zmax(const Bracket& br, double L, double c_attained);

/// Sampled asymptotic check of the split growth condition (method
/// "sampled asymptotic").  variant 1: y f1 / |y|^3 <= c(t) as |y| grows and
/// f2 nonincreasing in y; variant 2: >= -c(t) and f2 nondecreasing.
/// Ratios are probed at |y| in {y_probe, 2 y_probe, 4 y_probe} with an
/// additive tolerance, monotonicity on a y grid in [-y_probe, y_probe].
ConditionRecord check_growth_condition(const ProblemDef& prob, const Bracket& br,
                                       const GridFunction& c, int variant, double y_probe = 1e3,
                                       double ratio_tol = 0.05);

/// K-hat = K + max over the band of
///   |f(t,x,alpha') - f(t,alpha,alpha')| + |f(t,x,beta') - f(t,beta,beta')|.
double compute_Khat(const ProblemDef& prob, const Bracket& br, double K, int gx = 33);

struct GrowthLK {
    double L = 0;
    double K = 0;
    double y0 = 0;
};

/// Constants making the growth condition quantitative on bounded slopes:
///   L  = 2 max(|alpha'| + |beta'|),
///   y0 = max(|alpha'| + |beta'|) + default_zmax(L, attained c),
///   K  = 2 max{|f1(t,x,y)| + c(t)(alpha'^2 + beta'^2) : |y| <= y0}.
/// y0 covers every slope the range checks probe, so K bounds the whole
/// sweep; the far field is the sampled asymptotic check's job.
GrowthLK growth_LK(const ProblemDef& prob, const Bracket& br, const GridFunction& c);

/// Time reversal t -> 1-t, y -> -y; turns the primed growth bounds of a
/// problem into the unprimed bounds of the reflected one.
ProblemDef reflect_problem(const ProblemDef& prob);
GridFunction reflect_grid(const GridFunction& g);
Bracket reflect_bracket(const Bracket& br);

}  // namespace pbvp

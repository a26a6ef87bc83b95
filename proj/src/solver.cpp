#include "pbvp/solver.hpp"

#include <lapacke.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

namespace pbvp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sup_abs(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

}  // namespace

double band_margin(const GridFunction& x, const Bracket& br) {
    double m = kInf;
    for (int i = 0; i <= x.n; ++i) {
        m = std::min(m, x.values[i] - br.alpha.values[i]);
        m = std::min(m, br.beta.values[i] - x.values[i]);
    }
    return m;
}

void check_membership(SolveResult& res, const Bracket& br, double N) {
    if (res.x.values.empty()) return;
    const int n = res.x.n;
    double scale = 0;
    for (int i = 0; i <= n; ++i)
        scale = std::max({scale, std::fabs(br.alpha.values[i]), std::fabs(br.beta.values[i])});
    const double atol = 1e-8 * (1 + scale);
    const double bm = band_margin(res.x, br);
    res.band_margin = bm;
    res.in_band = bm >= -atol;
    bool slopes = true;
    for (int i = 0; i <= n && slopes; ++i) {
        const double lo =
            br.alpha.derivative[i] - N * (res.x.values[i] - br.alpha.values[i]);
        const double hi =
            br.beta.derivative[i] + N * (br.beta.values[i] - res.x.values[i]);
        const double d = res.x.derivative[i];
        if (d < lo - atol * (1 + N) || d > hi + atol * (1 + N)) slopes = false;
    }
    res.slopes_ok = slopes;
}

GridFunction constant_guess(int n, double value) {
    GridFunction g;
    g.n = n;
    g.periodic = true;
    g.values.assign(n + 1, value);
    g.derivative.assign(n + 1, 0.0);
    return g;
}

GridFunction default_eta0(const Bracket& br, const LinearParams& p, double Delta) {
    const int n = br.beta.n;
    GridFunction g;
    g.n = n;
    g.periodic = true;
    g.values.resize(n + 1);
    g.derivative.resize(n + 1);
    const double shift = Delta / p.a;
    for (int i = 0; i <= n; ++i) {
        const double t = br.beta.t(i);
        g.values[i] = br.beta.values[i] - br.r2 * h_eval(p, t) + shift;
        g.derivative[i] = br.beta.derivative[i] - br.r2 * h_prime_eval(p, t);
    }
    g.derivative[n] = g.derivative[0] = 0.5 * (g.derivative[0] + g.derivative[n]);
    return g;
}

LinearParams default_shift(const ProblemDef& prob, const GridFunction& eta0) {
    double lip = 0;
    for (int i = 0; i <= eta0.n; i += std::max(1, eta0.n / 64)) {
        const double t = eta0.t(i);
        const double x = eta0.values[i];
        const double y = eta0.has_derivative() ? eta0.derivative[i] : 0.0;
        const double fx = prob.dfdx(t, x, y);
        const double fy = prob.dfdy(t, x, y);
        if (std::isfinite(fx) && std::isfinite(fy))
            lip = std::max(lip, std::fabs(fx) + std::fabs(fy));
    }
    return make_params(1.0 + lip, 0.0);
}

ShiftChoice pick_shift(const ProblemDef& prob, const Bracket& br, const HypoSummary& hypo) {
    if (!(hypo.mu > 0)) throw std::invalid_argument("pick_shift: mu must be positive");
    if (!(hypo.c < 1)) throw std::invalid_argument("pick_shift: need c < 1");
    const int n = br.alpha.n;
    ShiftChoice out;

    // N0: smallest power of two with beta - alpha + (beta'-alpha')/N > 0.
    double N0 = 1;
    for (;; N0 *= 2) {
        if (N0 > 1e12) throw std::runtime_error("pick_shift: N0 scan exhausted");
        double worst = kInf;
        for (int i = 0; i <= n; ++i)
            worst = std::min(worst, br.beta.values[i] - br.alpha.values[i] +
                                        (br.beta.derivative[i] - br.alpha.derivative[i]) / N0);
        if (worst > 0) break;
    }
    out.N0 = N0;
    out.N = std::max({N0, hypo.ell + 1, (hypo.Khat + hypo.L * hypo.mu) /
                                            ((1 - hypo.c) * hypo.mu)});

    // C_N: slope maximum over the fan E_N = {alpha <= x <= beta,
    // alpha' - N(x-alpha) <= y <= beta' + N(beta-x)} on a 32^3 grid.
    const int gs = 32;
    double cn = 0;
    for (int i = 0; i <= n; i += std::max(1, n / (gs - 1))) {
        const double t = br.alpha.t(i);
        const double av = br.alpha.values[i], bv = br.beta.values[i];
        for (int j = 0; j < gs; ++j) {
            const double x = av + (bv - av) * j / (gs - 1);
            const double ylo = br.alpha.derivative[i] - out.N * (x - av);
            const double yhi = br.beta.derivative[i] + out.N * (bv - x);
            for (int k = 0; k < gs; ++k) {
                const double y = ylo + (yhi - ylo) * k / (gs - 1);
                const double fx = prob.dfdx(t, x, y);
                const double fy = prob.dfdy(t, x, y);
                if (std::isfinite(fx) && std::isfinite(fy))
                    cn = std::max(cn, std::fabs(fx) + std::fabs(fy));
            }
        }
    }
    out.C_N = cn;

    // a0: smallest power of two making the defect comparison nonnegative
    // with b tied to a through b = -a/N + N.
    const double a_floor = (out.N + out.C_N + hypo.ell) * out.N;
    double a0 = 1;
    for (;; a0 *= 2) {
        if (a0 > 1e15) throw std::runtime_error("pick_shift: a0 scan exhausted");
        const double b = -a0 / out.N + out.N;
        double worst = kInf;
        for (int i = 0; i <= n; ++i) {
            const double t = br.alpha.t(i);
            const double fb = prob.eval(t, br.beta.values[i], br.beta.derivative[i]);
            const double fa = prob.eval(t, br.alpha.values[i], br.alpha.derivative[i]);
            worst = std::min(worst,
                             a0 * (br.beta.values[i] - br.alpha.values[i]) -
                                 b * (br.beta.derivative[i] - br.alpha.derivative[i]) +
                                 fb - fa);
        }
        if (worst >= 0) break;
    }
    out.a0 = a0;
    out.a = std::max(a0, a_floor);
    out.b = -out.a / out.N + out.N;
    return out;
}

SolveResult solve_fixed_point(const ProblemDef& prob, const LinearParams& p,
                              const GridFunction& eta0, const SolveConfig& cfg) {
    GridFunction x = eta0;
    if (!x.has_derivative()) x.derivative = differentiate(x).values;
    x.periodic = true;
    const double w = cfg.relaxation;
    if (!(w > 0 && w <= 1))
        throw std::invalid_argument("solve_fixed_point: relaxation must be in (0,1]");

    SolveResult res;
    res.method = "fixed_point";
    GridFunction best_x = x;
    double best = residual(prob, x);
    res.history.push_back(best);
    for (int it = 1; it <= cfg.max_iter; ++it) {
        GridFunction tx = apply_T(prob, p, x);
        for (size_t i = 0; i < x.values.size(); ++i) {
            x.values[i] = (1 - w) * x.values[i] + w * tx.values[i];
            x.derivative[i] = (1 - w) * x.derivative[i] + w * tx.derivative[i];
        }
        const double r = residual(prob, x);
        res.history.push_back(r);
        res.iterations = it;
        if (r < best) {
            best = r;
            best_x = x;
        }
        if (best <= cfg.tol) break;
        if (!std::isfinite(r))
            throw SolveDivergence("fixed point iteration produced non-finite values",
                                  res.history);
        if (it > 3 && r > 10 * best && r > 100 * cfg.tol) {
            char buf[128];
            std::snprintf(buf, sizeof(buf),
                          "fixed point iteration diverged at step %d (residual %.3g, best %.3g)",
                          it, r, best);
            throw SolveDivergence(buf, res.history);
        }
    }
    res.x = std::move(best_x);
    res.residual = best;
    res.converged = best <= cfg.tol;
    return res;
}

namespace {

// Periodic 4th order difference operators on node values u_0..u_{n-1}.
void apply_d1_d2(const std::vector<double>& u, double h, std::vector<double>& d1,
                 std::vector<double>& d2) {
    const int n = static_cast<int>(u.size());
    d1.resize(n);
    d2.resize(n);
    for (int i = 0; i < n; ++i) {
        const double um2 = u[(i - 2 + n) % n], um1 = u[(i - 1 + n) % n];
        const double up1 = u[(i + 1) % n], up2 = u[(i + 2) % n];
        d1[i] = (um2 - 8 * um1 + 8 * up1 - up2) / (12 * h);
        d2[i] = (-um2 + 16 * um1 - 30 * u[i] + 16 * up1 - up2) / (12 * h * h);
    }
}

struct CollocationSystem {
    const ProblemDef& prob;
    int n;
    double h;
    std::vector<double> t;

    CollocationSystem(const ProblemDef& p, int n_) : prob(p), n(n_), h(1.0 / n_) {
        t.resize(n);
        for (int i = 0; i < n; ++i) t[i] = static_cast<double>(i) / n;
    }

    std::vector<double> defect(const std::vector<double>& u, double* fmax = nullptr) const {
        std::vector<double> d1, d2, r(n);
        apply_d1_d2(u, h, d1, d2);
        double fm = 0;
        for (int i = 0; i < n; ++i) {
            const double fv = prob.eval(t[i], u[i], d1[i]);
            fm = std::max(fm, std::fabs(fv));
            r[i] = d2[i] + fv;
        }
        if (fmax) *fmax = fm;
        return r;
    }
};

// Solves J s = rhs where J = D2 + diag(fx) + diag(fy) D1 on the periodic
// grid: pentadiagonal plus six wrap-around entries.  Banded LU plus a
// rank-4 update handles the wrap; any factorization failure falls back to
// a dense solve.
class CollocationJacobian {
public:
    CollocationJacobian(int n, double h, const std::vector<double>& fx,
                        const std::vector<double>& fy)
        : n_(n), fx_(fx), fy_(fy) {
        const double ih = 1.0 / (12 * h), ih2 = 1.0 / (12 * h * h);
        d1c_ = {ih, -8 * ih, 0.0, 8 * ih, -ih};
        d2c_ = {-ih2, 16 * ih2, -30 * ih2, 16 * ih2, -ih2};
    }

    double entry(int i, int o) const {  // offset o in [-2,2], column (i+o) mod n
        double v = d2c_[o + 2] + fy_[i] * d1c_[o + 2];
        if (o == 0) v += fx_[i];
        return v;
    }

    bool solve_banded(const std::vector<double>& rhs, std::vector<double>& out) const {
        const int n = n_, kl = 2, ku = 2, ldab = 2 * kl + ku + 1;
        const int corner_rows[4] = {0, 1, n - 2, n - 1};
        std::vector<double> ab(static_cast<size_t>(ldab) * n, 0.0);
        // Wrap entries removed from the band, kept as 4 sparse row vectors
        // for the low-rank correction.
        std::vector<double> vt(static_cast<size_t>(4) * n, 0.0);
        for (int i = 0; i < n; ++i) {
            for (int o = -2; o <= 2; ++o) {
                const int j = (i + o + n) % n;
                const double v = entry(i, o);
                if (std::abs(i - j) <= 2) {
                    ab[static_cast<size_t>(ldab) * j + (kl + ku + i - j)] += v;
                } else {
                    int c = -1;
                    for (int q = 0; q < 4; ++q)
                        if (corner_rows[q] == i) c = q;
                    if (c < 0) return false;  // unexpected wrap row
                    vt[static_cast<size_t>(c) * n + j] += v;
                }
            }
        }
        const int nrhs = 5;  // [rhs | e_r0 .. e_r3]
        std::vector<double> bm(static_cast<size_t>(n) * nrhs, 0.0);
        for (int i = 0; i < n; ++i) bm[i] = rhs[i];
        for (int c = 0; c < 4; ++c) bm[static_cast<size_t>(n) * (c + 1) + corner_rows[c]] = 1.0;
        std::vector<lapack_int> ipiv(n);
        lapack_int info = LAPACKE_dgbsv(LAPACK_COL_MAJOR, n, kl, ku, nrhs, ab.data(), ldab,
                                        ipiv.data(), bm.data(), n);
        if (info != 0) return false;

        // x = y - W (I + V W)^{-1} V y with y = B^{-1} rhs, W = B^{-1} U
        double smat[16], zvec[4];
        for (int c = 0; c < 4; ++c) {
            zvec[c] = 0;
            for (int j = 0; j < n; ++j) {
                const double vcj = vt[static_cast<size_t>(c) * n + j];
                if (vcj != 0) zvec[c] += vcj * bm[j];
            }
            for (int d = 0; d < 4; ++d) {
                double s = (c == d) ? 1.0 : 0.0;
                for (int j = 0; j < n; ++j) {
                    const double vcj = vt[static_cast<size_t>(c) * n + j];
                    if (vcj != 0) s += vcj * bm[static_cast<size_t>(n) * (d + 1) + j];
                }
                smat[c + 4 * d] = s;
            }
        }
        lapack_int ipiv4[4];
        info = LAPACKE_dgesv(LAPACK_COL_MAJOR, 4, 1, smat, 4, ipiv4, zvec, 4);
        if (info != 0) return false;
        out.resize(n);
        for (int i = 0; i < n; ++i) {
            double v = bm[i];
            for (int c = 0; c < 4; ++c) v -= bm[static_cast<size_t>(n) * (c + 1) + i] * zvec[c];
            out[i] = v;
        }
        for (double v : out)
            if (!std::isfinite(v)) return false;
        return true;
    }

    bool solve_dense(std::vector<double> rhs, std::vector<double>& out) const {
        const int n = n_;
        std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int o = -2; o <= 2; ++o) {
                const int j = (i + o + n) % n;
                a[static_cast<size_t>(j) * n + i] += entry(i, o);
            }
        std::vector<lapack_int> ipiv(n);
        lapack_int info =
            LAPACKE_dgesv(LAPACK_COL_MAJOR, n, 1, a.data(), n, ipiv.data(), rhs.data(), n);
        if (info != 0) return false;
        for (double v : rhs)
            if (!std::isfinite(v)) return false;
        out = std::move(rhs);
        return true;
    }

    // LU with rounding can report success on an exactly singular system;
    // accept a step only when its linear residual is small against rhs.
    bool residual_ok(const std::vector<double>& rhs, const std::vector<double>& out) const {
        const int n = n_;
        double rmax = 0, bmax = 0;
        for (int i = 0; i < n; ++i) {
            double acc = 0;
            for (int o = -2; o <= 2; ++o) acc += entry(i, o) * out[(i + o + n) % n];
            rmax = std::max(rmax, std::fabs(acc - rhs[i]));
            bmax = std::max(bmax, std::fabs(rhs[i]));
        }
        return rmax <= 1e-7 * (bmax + 1e-300);
    }

    bool solve(const std::vector<double>& rhs, std::vector<double>& out) const {
        if (solve_banded(rhs, out) && residual_ok(rhs, out)) return true;
        return solve_dense(rhs, out) && residual_ok(rhs, out);
    }

private:
    int n_;
    std::vector<double> fx_, fy_;
    std::array<double, 5> d1c_{}, d2c_{};
};

SolveResult finish_newton(const CollocationSystem& sys, std::vector<double> u,
                          const ProblemDef& prob, bool converged, int iterations,
                          std::vector<double> history) {
    GridFunction x;
    x.n = sys.n;
    x.periodic = true;
    x.values = u;
    x.values.push_back(u[0]);
    std::vector<double> d1, d2;
    apply_d1_d2(u, sys.h, d1, d2);
    x.derivative = d1;
    x.derivative.push_back(d1[0]);
    SolveResult res;
    res.method = "newton";
    res.x = std::move(x);
    res.residual = residual(prob, res.x);
    res.converged = converged;
    res.iterations = iterations;
    res.history = std::move(history);
    return res;
}

}  // namespace

SolveResult solve_newton(const ProblemDef& prob, const SolveConfig& cfg,
                         const GridFunction* eta0) {
    const int n = eta0 ? eta0->n : cfg.n;
    if (n < 16) throw std::invalid_argument("solve_newton: grid too small");
    CollocationSystem sys(prob, n);
    std::vector<double> u(n, 0.0);
    if (eta0)
        for (int i = 0; i < n; ++i) u[i] = eta0->values[i];

    std::vector<double> history;
    bool converged = false;
    int it = 0, nudges = 0;
    double fmax = 0;
    std::vector<double> r = sys.defect(u, &fmax);
    double norm = sup_abs(r);
    for (; it < cfg.max_iter; ++it) {
        history.push_back(norm);
        // The 1/h^2 stencil cannot resolve a defect below its own rounding
        // noise; below that floor the line search only chases noise.
        const double floor_eps = 8 * std::numeric_limits<double>::epsilon() *
                                 (1 + sup_abs(u)) / (sys.h * sys.h);
        if (norm <= cfg.tol * std::min(1.0 + fmax, 1e4) + floor_eps) {
            converged = true;
            break;
        }
        std::vector<double> fx(n), fy(n), d1, d2;
        apply_d1_d2(u, sys.h, d1, d2);
        for (int i = 0; i < n; ++i) {
            fx[i] = prob.dfdx(sys.t[i], u[i], d1[i]);
            fy[i] = prob.dfdy(sys.t[i], u[i], d1[i]);
            if (!std::isfinite(fx[i]) || !std::isfinite(fy[i]))
                throw std::runtime_error("solve_newton: non-finite partials at iterate");
        }
        CollocationJacobian jac(n, sys.h, fx, fy);
        std::vector<double> rhs(n), step;
        for (int i = 0; i < n; ++i) rhs[i] = -r[i];
        if (!jac.solve(rhs, step)) {
            // Constant starts can zero the mean mode of the Jacobian
            // exactly; kick the iterate off the degenerate point and retry.
            if (nudges < 2) {
                const double dir = nudges == 0 ? -1.0 : 2.0;
                for (int i = 0; i < n; ++i) u[i] += dir * 0.02 * (1 + std::fabs(u[i]));
                ++nudges;
                r = sys.defect(u, &fmax);
                norm = sup_abs(r);
                continue;
            }
            throw std::runtime_error("solve_newton: singular collocation Jacobian");
        }

        double lam = 1.0;
        bool accepted = false;
        std::vector<double> u_try(n), r_try;
        double fmax_try = 0, norm_try = 0;
        for (int back = 0; back < 7; ++back, lam *= 0.5) {
            for (int i = 0; i < n; ++i) u_try[i] = u[i] + lam * step[i];
            r_try = sys.defect(u_try, &fmax_try);
            norm_try = sup_abs(r_try);
            if (std::isfinite(norm_try) && norm_try < (1 - 0.25 * lam) * norm) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (std::isfinite(norm_try) && norm_try < norm) {
                accepted = true;  // slow progress is still progress
            } else {
                break;  // stalled
            }
        }
        u = u_try;
        r = r_try;
        norm = norm_try;
        fmax = fmax_try;
    }
    return finish_newton(sys, std::move(u), prob, converged, it, std::move(history));
}

double continuation_pull(double eps, double x, double alpha, double beta) {
    const double span = beta - alpha;
    if (!(span > 0) || eps == 0) return 0;
    return (1 - 2 * (x - alpha) / span) * eps;
}

namespace {

/// Truncated and eps-perturbed right hand side used by the continuation
/// stages: f evaluated with x clamped into [alpha(t), beta(t)], plus the
/// inward pull continuation_pull.
ProblemDef staged_problem(const ProblemDef& prob, const Bracket& br, double eps) {
    ProblemDef out;
    out.label = prob.label + ".staged";
    out.domain_floor = prob.domain_floor;
    const GridFunction alpha = br.alpha;  // closures receive arbitrary t
    const GridFunction beta = br.beta;
    const auto edges = [alpha, beta](double t, double* lo, double* hi) {
        *lo = interp(alpha, t);
        *hi = interp(beta, t);
    };
    const auto base = prob.f;
    out.f = [base, edges, eps](double t, double x, double y) {
        double lo, hi;
        edges(t, &lo, &hi);
        const double xc = std::min(std::max(x, lo), hi);
        return base(t, xc, y) + continuation_pull(eps, x, lo, hi);
    };
    const ProblemDef inner = prob;  // for partials with FD fallback
    out.fx = [inner, edges, eps](double t, double x, double y) {
        double lo, hi;
        edges(t, &lo, &hi);
        const double xc = std::min(std::max(x, lo), hi);
        const bool active = x <= lo || x >= hi;
        double g = 0;
        if (eps > 0 && hi - lo > 0) g = -2 * eps / (hi - lo);
        return (active ? 0.0 : inner.dfdx(t, xc, y)) + g;
    };
    out.fy = [inner, edges](double t, double x, double y) {
        double lo, hi;
        edges(t, &lo, &hi);
        const double xc = std::min(std::max(x, lo), hi);
        return inner.dfdy(t, xc, y);
    };
    return out;
}

GridFunction band_midpoint(const Bracket& br) {
    GridFunction g = constant_guess(br.alpha.n, 0.0);
    for (int i = 0; i <= br.alpha.n; ++i) {
        g.values[i] = 0.5 * (br.alpha.values[i] + br.beta.values[i]);
        g.derivative[i] = 0.5 * (br.alpha.derivative[i] + br.beta.derivative[i]);
    }
    return g;
}

}  // namespace

SolveResult solve_continuation(const ProblemDef& prob, const Bracket& br,
                               const SolveConfig& cfg) {
    std::vector<double> schedule = cfg.eps_schedule;
    if (schedule.empty() || schedule.back() != 0.0) schedule.push_back(0.0);
    for (size_t i = 1; i < schedule.size(); ++i)
        if (!(schedule[i] < schedule[i - 1]))
            throw std::invalid_argument("solve_continuation: eps schedule must decrease");

    const int n = br.alpha.n;
    GridFunction guess = band_midpoint(br);
    SolveResult last;
    std::vector<double> history;
    for (double eps : schedule) {
        ProblemDef staged = staged_problem(prob, br, eps);
        SolveConfig stage_cfg = cfg;
        stage_cfg.n = n;
        last = solve_newton(staged, stage_cfg, &guess);
        history.insert(history.end(), last.history.begin(), last.history.end());
        if (!last.converged) break;
        guess = last.x;
    }
    if (!last.x.values.empty()) {
        int clamped = 0;
        for (int i = 0; i <= n; ++i)
            if (last.x.values[i] < br.alpha.values[i] || last.x.values[i] > br.beta.values[i])
                ++clamped;
        last.clamp_activity = static_cast<double>(clamped) / (n + 1);
        last.band_margin = band_margin(last.x, br);
        // The staged equation agrees with the original only inside the band:
        // report the true defect.
        last.residual = residual(prob, last.x);
        last.converged = last.converged && last.residual <= cfg.tol;
    }
    last.method = "continuation";
    last.history = std::move(history);
    return last;
}

SolveResult solve_auto(const ProblemDef& prob, const SolveConfig& cfg, const Bracket* br) {
    LinearParams shift{};
    GridFunction guess;
    if (cfg.shift_a) {
        shift = make_params(*cfg.shift_a, cfg.shift_b.value_or(0.0));
        guess = br ? default_eta0(*br, shift) : constant_guess(cfg.n, 0.0);
    } else if (br) {
        shift = default_shift(prob, band_midpoint(*br));
        guess = default_eta0(*br, shift);
    } else {
        guess = constant_guess(cfg.n, 0.0);
        shift = default_shift(prob, guess);
    }

    SolveResult attempt;
    const bool only_fp = cfg.mode == SolveMode::fixed_point;
    if (cfg.mode == SolveMode::automatic || only_fp) {
        for (double w : {cfg.relaxation, 0.5, 0.2}) {
            SolveConfig fp_cfg = cfg;
            fp_cfg.relaxation = w;
            try {
                attempt = solve_fixed_point(prob, shift, guess, fp_cfg);
            } catch (const SolveDivergence&) {
                if (only_fp && w == 0.2) throw;
                continue;
            }
            if (attempt.converged || only_fp) {
                if (br) check_membership(attempt, *br, shift.k0);
                return attempt;
            }
            // Partial progress is still the best start Newton can get.
            if (!attempt.x.values.empty()) guess = attempt.x;
        }
        if (only_fp) return attempt;
    }

    SolveResult escaped;  // Newton converged but left the certified band
    bool have_escape = false;
    if (cfg.mode == SolveMode::automatic || cfg.mode == SolveMode::newton) {
        try {
            attempt = solve_newton(prob, cfg, guess.values.empty() ? nullptr : &guess);
            if (attempt.converged || cfg.mode == SolveMode::newton) {
                if (br) check_membership(attempt, *br, shift.k0);
                if (cfg.mode == SolveMode::newton ||
                    !(attempt.in_band && !*attempt.in_band))
                    return attempt;
                // The bracket certifies a banded solution; let the clamped
                // continuation look for it before settling for this one.
                escaped = attempt;
                have_escape = true;
            }
        } catch (const std::exception&) {
            if (cfg.mode == SolveMode::newton) throw;
        }
    }

    if (br && (cfg.mode == SolveMode::automatic || cfg.mode == SolveMode::continuation)) {
        try {
            attempt = solve_continuation(prob, *br, cfg);
            check_membership(attempt, *br, shift.k0);
            if (attempt.converged || !have_escape) return attempt;
        } catch (const std::exception&) {
            if (!have_escape) throw;
        }
        return escaped;
    }
    if (have_escape) return escaped;
    if (cfg.mode == SolveMode::continuation)
        throw std::invalid_argument("solve_auto: continuation mode needs a bracket");
    attempt.converged = false;
    return attempt;
}

}  // namespace pbvp

#include "pbvp/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pbvp {

namespace {

constexpr double kPi = 3.14159265358979323846;

double rel_tol(double scale) { return 1e-12 * (1 + std::fabs(scale)); }

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

std::vector<double> slope_of(const GridFunction& g) {
    return g.has_derivative() ? g.derivative : differentiate(g).values;
}

GridFunction constant_grid(int n, double v) {
    GridFunction g;
    g.n = n;
    g.periodic = true;
    g.values.assign(n + 1, v);
    g.derivative.assign(n + 1, 0.0);
    g.second.assign(n + 1, 0.0);
    return g;
}

double curve_slope(const Curve& c, double x) {
    if (c.df) return c.df(x);
    const double s = 1e-6 * (1 + std::fabs(x));
    return (c.f(x + s) - c.f(x - s)) / (2 * s);
}

/// First X (doubling from start) with g <= target there and on a
/// log-spaced sweep one decade above.
double scan_for_level(const std::function<double(double)>& g, double start, double target) {
    double X = std::max(start, 1.0);
    for (int iter = 0; iter < 60; ++iter, X *= 2) {
        if (g(X) > target) continue;
        bool ok = true;
        for (int j = 1; j <= 32 && ok; ++j)
            if (g(X * std::pow(64.0, j / 32.0)) > target) ok = false;
        if (ok) return X;
    }
    throw std::runtime_error("level scan exhausted: nonlinearity does not settle below the target");
}

double singular_floor(const SingularSpec& spec) {
    if (spec.c > 0) return spec.c;
    require(spec.C > 0, "singular: C must be positive");
    return std::pow(spec.C, -1.0 / spec.lambda);
}

void validate_singular(const SingularSpec& spec) {
    spec.p.validate();
    spec.e.validate();
    require(spec.p.n == spec.e.n, "singular: p and e must share a grid");
    require(spec.lambda > 0, "singular: lambda must be positive");
    for (double v : spec.p.values) require(v > 0, "singular: p must be positive");
    require(integrate(spec.e) > 0, "singular: mean forcing must be positive");
    const double floor = singular_floor(spec);
    require(floor > 0, "singular: floor must be positive");
    const double cap = std::pow(floor, -spec.lambda);
    for (int i = 0; i <= spec.p.n; ++i)
        require(spec.p.values[i] * cap - spec.e.values[i] >= -rel_tol(spec.e.values[i]),
                "singular: need p(t) c^{-lambda} >= e(t) for the constant lower level");
}

void validate_duffing(const DuffingSpec& spec) {
    spec.p.validate();
    spec.q.validate();
    spec.e.validate();
    require(spec.p.n == spec.q.n && spec.p.n == spec.e.n,
            "duffing: p, q, e must share a grid");
    require(static_cast<bool>(spec.g.f) && static_cast<bool>(spec.h.f),
            "duffing: g and h evaluators are required");
    require(spec.c > 0, "duffing: the lower level c is required");
    for (double v : spec.q.values) require(v >= 0, "duffing: q must be nonnegative");
    require(std::fabs(spec.h.f(0.0)) <= 1e-12, "duffing: h(0) must vanish");
    const double gc = spec.g.f(spec.c);
    for (int i = 0; i <= spec.p.n; ++i)
        require(gc * spec.p.values[i] - spec.e.values[i] >= -rel_tol(spec.e.values[i]),
                "duffing: need g(c) p(t) >= e(t) for the constant lower level");

    const double ebar = integrate(spec.e);
    require(ebar > 0, "duffing: mean forcing must be positive");
    if (spec.variant == DuffingVariant::example2) {
        const double Y = std::max(8.0, 8 * ebar);
        for (int j = 0; j <= 1024; ++j) {
            const double y = -Y + 2 * Y * j / 1024.0;
            require(spec.h.f(y) >= -1e-12 * (1 + Y), "duffing: h must be nonnegative");
        }
    } else {
        for (double v : spec.p.values) require(v >= 0, "duffing: p must be nonnegative");
        for (double v : spec.e.values) require(v >= 0, "duffing: e must be nonnegative");
        const double qbar = integrate(spec.q);
        require(qbar > 0, "duffing: mean friction weight must be positive");
        double worst = 0;
        for (int j = 0; j <= 1024; ++j) {
            const double y = -2 * ebar + 4 * ebar * j / 1024.0;
            worst = std::max(worst, -spec.h.f(y));
        }
        require(worst < ebar / qbar,
                "duffing: h dips below -mean(e)/mean(q) on the slope window");
    }
}

int probe_growth_variant(const DuffingSpec& spec) {
    double smin = 0, smax = 0;
    for (double mag : {1e3, 2e3, 4e3}) {
        for (double y : {mag, -mag}) {
            const double s = y * spec.h.f(y) / (mag * mag * mag);
            smin = std::min(smin, s);
            smax = std::max(smax, s);
        }
    }
    if (smin >= -0.05) return 1;  // y h(y)/|y|^3 stays above 0: f1 side bounded above
    if (smax <= 0.05) return 2;
    throw std::invalid_argument("duffing: h grows on both sides at cubic scale");
}

}  // namespace

ProblemDef pendulum_to_standard(const PendulumSpec& spec) {
    spec.mu.validate();
    spec.e.validate();
    require(spec.mu.n == spec.e.n, "pendulum: mu and e must share a grid");
    require(static_cast<bool>(spec.ell), "pendulum: ell evaluator is required");
    require(spec.r > 0, "pendulum: r must be positive");
    for (int i = 0; i <= spec.mu.n; ++i) {
        const double t = spec.mu.t(i);
        const double mu = spec.mu.values[i], ev = spec.e.values[i];
        require(mu - std::fabs(ev) >= -rel_tol(mu),
                "pendulum: need mu(t) >= |e(t)|");
        double ell0 = spec.ell(t, kPi / 2);
        for (int j = 1; j <= 64; ++j)
            ell0 = std::min(ell0, spec.ell(t, kPi / 2 + kPi * j / 64.0));
        require(spec.r * ell0 - mu >= -rel_tol(mu),
                "pendulum: need r * min_x ell(t,x) >= mu(t)");
    }

    const GridFunction mu = spec.mu, e = spec.e;
    const auto ell = spec.ell;
    ProblemDef out;
    out.label = "pendulum";
    out.f = [mu, e, ell](double t, double x, double y) {
        const double cube = std::pow(1 + y * y, 1.5);
        return cube * (interp(mu, t) * std::sin(x) - ell(t, x) * y - interp(e, t));
    };
    out.fx = [mu, ell](double t, double x, double y) {
        const double s = 1e-6 * (1 + std::fabs(x));
        const double dldx = (ell(t, x + s) - ell(t, x - s)) / (2 * s);
        return std::pow(1 + y * y, 1.5) * (interp(mu, t) * std::cos(x) - dldx * y);
    };
    out.fy = [mu, e, ell](double t, double x, double y) {
        const double lv = ell(t, x);
        const double core = interp(mu, t) * std::sin(x) - lv * y - interp(e, t);
        return 3 * y * std::sqrt(1 + y * y) * core - std::pow(1 + y * y, 1.5) * lv;
    };
    return out;
}

ProblemDef singular_to_standard(const SingularSpec& spec) {
    validate_singular(spec);
    const double floor = singular_floor(spec);
    const double lambda = spec.lambda;
    const GridFunction p = spec.p, e = spec.e;
    ProblemDef out;
    out.label = "singular";
    out.domain_floor = floor;
    out.f = [p, e, floor, lambda](double t, double x, double y) {
        (void)y;
        return interp(p, t) * std::pow(std::max(x, floor), -lambda) - interp(e, t);
    };
    out.fx = [p, floor, lambda](double t, double x, double) {
        if (x < floor) return 0.0;  // frozen branch
        return -lambda * interp(p, t) * std::pow(x, -lambda - 1);
    };
    out.fy = [](double, double, double) { return 0.0; };
    return out;
}

ProblemDef duffing_to_standard(const DuffingSpec& spec) {
    validate_duffing(spec);
    const GridFunction p = spec.p, q = spec.q, e = spec.e;
    const Curve g = spec.g, h = spec.h;
    const double c = spec.c;
    ProblemDef out;
    out.label = "duffing";
    out.domain_floor = c;
    out.f1 = [q, h](double t, double, double y) { return -interp(q, t) * h.f(y); };
    out.f2 = [p, e, g, c](double t, double x, double) {
        return interp(p, t) * g.f(std::max(x, c)) - interp(e, t);
    };
    const auto f1 = out.f1, f2 = out.f2;
    out.f = [f1, f2](double t, double x, double y) { return f1(t, x, y) + f2(t, x, y); };
    out.fx = [p, g, c](double t, double x, double) {
        if (x < c) return 0.0;  // frozen branch
        return interp(p, t) * curve_slope(g, x);
    };
    out.fy = [q, h](double t, double, double y) { return -interp(q, t) * curve_slope(h, y); };
    return out;
}

GridFunction build_beta_example1(const GridFunction& e, double m) {
    e.validate();
    const int n = e.n;
    const std::vector<double> ep = slope_of(e);
    GridFunction w1, w2;
    w1.n = w2.n = n;
    w1.values.resize(n + 1);
    w1.derivative.resize(n + 1);
    w2.values.resize(n + 1);
    w2.derivative.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double s = e.t(i);
        w1.values[i] = s * e.values[i];
        w1.derivative[i] = e.values[i] + s * ep[i];
        w2.values[i] = (1 - s) * e.values[i];
        w2.derivative[i] = -e.values[i] + (1 - s) * ep[i];
    }
    const GridFunction I1 = cumulative_integral(w1);
    const GridFunction J = cumulative_integral(w2);
    const double nbar = 0.5 * integrate(e);

    GridFunction beta;
    beta.n = n;
    beta.periodic = true;
    beta.values.resize(n + 1);
    beta.derivative.resize(n + 1);
    beta.second.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double t = e.t(i);
        const double i2 = J.values[n] - J.values[i];
        beta.values[i] = m + nbar * t * (1 - t) - ((1 - t) * I1.values[i] + t * i2);
        beta.derivative[i] = nbar * (1 - 2 * t) + I1.values[i] - i2;
        beta.second[i] = -2 * nbar + e.values[i];
    }
    // zero derivative jump by construction; pin out the quadrature roundoff
    const double dend = 0.5 * (beta.derivative[0] + beta.derivative[n]);
    beta.derivative[0] = beta.derivative[n] = dend;
    return beta;
}

GridFunction build_beta_example1(const SingularSpec& spec, double m) {
    return build_beta_example1(spec.e, m);
}

double choose_m_example1(const SingularSpec& spec) {
    validate_singular(spec);
    const double floor = singular_floor(spec);
    const double ebar = integrate(spec.e);
    double pmax = 0;
    for (double v : spec.p.values) pmax = std::max(pmax, v);
    const double d = std::max(floor, std::pow(pmax / ebar, 1.0 / spec.lambda));
    const GridFunction psi = build_beta_example1(spec.e, 0.0);
    double lowest = 0;
    for (double v : psi.values) lowest = std::min(lowest, v);
    return d - lowest;
}

GridFunction build_beta_example3(const DuffingSpec& spec, double n1, double m) {
    const double ebar = integrate(spec.e);
    const double qbar = integrate(spec.q);
    const double pbar = integrate(spec.p);
    require(pbar > 0, "example3 level: mean(p) must be positive");
    require(qbar > 0, "example3 level: mean(q) must be positive");
    require(n1 > 0 && n1 < ebar / qbar,
            "example3 level: need 0 < n1 < mean(e)/mean(q)");
    double worst = 0;
    for (int j = 0; j <= 1024; ++j) {
        const double y = -2 * ebar + 4 * ebar * j / 1024.0;
        worst = std::max(worst, -spec.h.f(y));
    }
    require(worst <= n1 + rel_tol(n1),
            "example3 level: -h exceeds n1 on the slope window");
    const double n2 = (ebar - qbar * n1) / pbar;

    const int n = spec.e.n;
    const std::vector<double> pp = slope_of(spec.p);
    const std::vector<double> qp = slope_of(spec.q);
    const std::vector<double> ep = slope_of(spec.e);
    GridFunction w;  // load n1 q + n2 p - e, mean zero by the choice of n2
    w.n = n;
    w.values.resize(n + 1);
    w.derivative.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        w.values[i] = n1 * spec.q.values[i] + n2 * spec.p.values[i] - spec.e.values[i];
        w.derivative[i] = n1 * qp[i] + n2 * pp[i] - ep[i];
    }
    GridFunction w1 = w, w2 = w;
    for (int i = 0; i <= n; ++i) {
        const double s = w.t(i);
        w1.values[i] = s * w.values[i];
        w1.derivative[i] = w.values[i] + s * w.derivative[i];
        w2.values[i] = (1 - s) * w.values[i];
        w2.derivative[i] = -w.values[i] + (1 - s) * w.derivative[i];
    }
    const GridFunction I1 = cumulative_integral(w1);
    const GridFunction J = cumulative_integral(w2);

    GridFunction beta;
    beta.n = n;
    beta.periodic = true;
    beta.values.resize(n + 1);
    beta.derivative.resize(n + 1);
    beta.second.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double t = w.t(i);
        const double i2 = J.values[n] - J.values[i];
        beta.values[i] = m + (1 - t) * I1.values[i] + t * i2;
        beta.derivative[i] = i2 - I1.values[i];
        beta.second[i] = -w.values[i];
        require(std::fabs(beta.derivative[i]) <= 2 * ebar + 1e-9 * (1 + 2 * ebar),
                "example3 level: |beta'| exceeds twice the mean forcing");
    }
    const double dend = 0.5 * (beta.derivative[0] + beta.derivative[n]);
    beta.derivative[0] = beta.derivative[n] = dend;
    return beta;
}

double default_n1(const DuffingSpec& spec) {
    const double ebar = integrate(spec.e);
    const double qbar = integrate(spec.q);
    require(ebar > 0 && qbar > 0, "example3 level: mean(e), mean(q) must be positive");
    double scan_max = 0;
    for (int j = 0; j <= 1024; ++j) {
        const double y = -2 * ebar + 4 * ebar * j / 1024.0;
        scan_max = std::max(scan_max, -spec.h.f(y));
    }
    const double cap = ebar / qbar;
    require(scan_max < cap * (1 - 1e-9),
            "example3 level: -h reaches mean(e)/mean(q), no admissible n1");
    const double mid = 0.5 * (std::max(scan_max, 0.0) + cap);
    double n1 = std::min(0.5 * cap, mid);
    if (n1 <= scan_max) n1 = mid;  // keep -h <= n1 strict
    return n1;
}

double choose_m_example2(const DuffingSpec& spec) {
    const double ebar = integrate(spec.e);
    require(ebar > 0, "example2 level: mean forcing must be positive");
    double pmax = 0;
    for (double v : spec.p.values) pmax = std::max(pmax, v);
    double d2 = spec.c;
    if (pmax > 0) d2 = std::max(d2, scan_for_level(spec.g.f, spec.c, ebar / pmax));
    const GridFunction psi = build_beta_example1(spec.e, 0.0);
    double lowest = 0;
    for (double v : psi.values) lowest = std::min(lowest, v);
    return std::max(spec.c, d2) - lowest;
}

double choose_m_example3(const DuffingSpec& spec, double n1) {
    const double ebar = integrate(spec.e);
    const double qbar = integrate(spec.q);
    const double pbar = integrate(spec.p);
    require(pbar > 0 && qbar > 0 && ebar > 0,
            "example3 level: mean(p), mean(q), mean(e) must be positive");
    const double n2 = (ebar - qbar * n1) / pbar;
    require(n2 > 0, "example3 level: n2 must come out positive");
    const double d3 = std::max(spec.c, scan_for_level(spec.g.f, spec.c, n2));
    const GridFunction psi = build_beta_example3(spec, n1, 0.0);
    double lowest = 0;
    for (double v : psi.values) lowest = std::min(lowest, v);
    // half-unit pad keeps the upper margin strictly positive on the grid
    return std::max(spec.c, d3) - lowest + 0.5;
}

double pendulum_default_d(const PendulumSpec& spec) {
    double lmax = spec.ell(0.0, kPi / 2);
    for (int i = 0; i <= spec.mu.n; ++i) {
        const double t = spec.mu.t(i);
        for (int j = 0; j <= 64; ++j)
            lmax = std::max(lmax, spec.ell(t, kPi / 2 + kPi * j / 64.0));
    }
    return std::pow(1 + kPi * kPi * spec.r * spec.r, 1.5) * lmax;
}

BuiltProblem build_pendulum(const PendulumSpec& spec) {
    BuiltProblem out;
    out.prob = pendulum_to_standard(spec);
    const double bound = pendulum_default_d(spec);
    const double d = spec.d > 0 ? spec.d : bound;
    require(d >= bound - 1e-9 * (1 + bound),
            "pendulum: d must dominate (1 + pi^2 r^2)^{3/2} max ell");
    const int n = spec.mu.n;
    auto cst = [](double v) {
        return [v](double) { return v; };
    };
    out.bracket = bracket_from_closures(n, cst(kPi / 2), cst(0.0), cst(0.0),
                                        cst(3 * kPi / 2), cst(0.0), cst(0.0));
    out.shift_a = spec.r * d;
    out.shift_b = -d;
    out.has_shift = true;
    out.family = "pendulum";
    return out;
}

BuiltProblem build_singular(const SingularSpec& spec) {
    BuiltProblem out;
    out.prob = singular_to_standard(spec);
    const double floor = singular_floor(spec);
    const double m = choose_m_example1(spec);
    GridFunction beta = build_beta_example1(spec, m);
    out.bracket = make_bracket(constant_grid(spec.e.n, floor), std::move(beta));
    double pmax = 0;
    for (double v : spec.p.values) pmax = std::max(pmax, v);
    out.shift_a = spec.lambda * pmax / std::pow(floor, spec.lambda + 1);
    out.shift_b = 0;
    out.has_shift = true;
    out.family = "singular";
    return out;
}

BuiltProblem build_duffing(const DuffingSpec& spec) {
    BuiltProblem out;
    out.prob = duffing_to_standard(spec);
    GridFunction beta;
    if (spec.variant == DuffingVariant::example2) {
        const double m = spec.m > 0 ? spec.m : choose_m_example2(spec);
        beta = build_beta_example1(spec.e, m);
    } else {
        const double n1 = spec.n1 > 0 ? spec.n1 : default_n1(spec);
        const double m = spec.m > 0 ? spec.m : choose_m_example3(spec, n1);
        beta = build_beta_example3(spec, n1, m);
    }
    out.bracket = make_bracket(constant_grid(spec.e.n, spec.c), std::move(beta));
    out.growth_c = 0;
    out.growth_variant = probe_growth_variant(spec);
    out.family = "duffing";
    return out;
}

Curve preset_g_inverse_power(double lambda) {
    require(lambda > 0, "preset g: lambda must be positive");
    return {[lambda](double x) { return std::pow(x, -lambda); },
            [lambda](double x) { return -lambda * std::pow(x, -lambda - 1); }};
}

Curve preset_h_two_branch(double lambda1, double lambda2) {
    require(lambda1 >= 1 && lambda1 < 2, "preset h: need 1 <= lambda1 < 2");
    require(lambda2 >= 1, "preset h: need lambda2 >= 1");
    return {[lambda1, lambda2](double y) {
                return y < 0 ? std::pow(-y, lambda1) : std::pow(y, lambda2);
            },
            [lambda1, lambda2](double y) {
                if (y < 0) return -lambda1 * std::pow(-y, lambda1 - 1);
                if (y > 0) return lambda2 * std::pow(y, lambda2 - 1);
                return lambda2 == 1 ? 1.0 : 0.0;  // right-hand slope at the kink
            }};
}

Curve preset_h_odd_poly(double mu, double nu, int k) {
    require(mu > 0 && nu > 0 && k >= 1, "preset h: need mu, nu > 0 and k >= 1");
    const double expo = 2 * k + 1;
    return {[mu, nu, expo](double y) { return mu * std::pow(y, expo) - nu * y; },
            [mu, nu, expo](double y) {
                return mu * expo * std::pow(y, expo - 1) - nu;
            }};
}

}  // namespace pbvp

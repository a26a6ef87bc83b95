#include "pbvp/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pbvp/operator_t.hpp"

namespace pbvp {

namespace {

struct State {
    double x, v;
};

/// One RK4 step of x' = v, v' = rhs(t, x, v).
template <typename Rhs>
State rk4_step(const Rhs& rhs, double t, State s, double h) {
    const auto f = [&rhs](double tt, State u) { return State{u.v, rhs(tt, u.x, u.v)}; };
    const State k1 = f(t, s);
    const State k2 = f(t + h / 2, {s.x + h / 2 * k1.x, s.v + h / 2 * k1.v});
    const State k3 = f(t + h / 2, {s.x + h / 2 * k2.x, s.v + h / 2 * k2.v});
    const State k4 = f(t + h, {s.x + h * k3.x, s.v + h * k3.v});
    return {s.x + h / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
            s.v + h / 6 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v)};
}

template <typename Rhs>
IvpResult run_ivp(const Rhs& rhs, double x0, double v0, int steps) {
    if (steps < 4) throw std::invalid_argument("integrate_ivp: too few steps");
    IvpResult out;
    out.trajectory.n = steps;
    out.trajectory.values.resize(steps + 1);
    out.trajectory.derivative.resize(steps + 1);
    State s{x0, v0};
    const double h = 1.0 / steps;
    out.trajectory.values[0] = x0;
    out.trajectory.derivative[0] = v0;
    for (int i = 0; i < steps; ++i) {
        s = rk4_step(rhs, i * h, s, h);
        if (!std::isfinite(s.x) || !std::isfinite(s.v))
            throw std::runtime_error("integrate_ivp: trajectory blew up near t = " +
                                     std::to_string((i + 1) * h));
        out.trajectory.values[i + 1] = s.x;
        out.trajectory.derivative[i + 1] = s.v;
    }
    out.x1 = s.x;
    out.v1 = s.v;
    return out;
}

}  // namespace

IvpResult integrate_ivp(const ProblemDef& prob, double x0, double v0, int steps) {
    const auto rhs = [&prob](double t, double x, double v) { return -prob.eval(t, x, v); };
    return run_ivp(rhs, x0, v0, steps);
}

SolveResult shoot_periodic(const ProblemDef& prob, double x0, double v0, int n, double tol,
                           int max_iter) {
    if (n < 16) throw std::invalid_argument("shoot_periodic: grid too small");
    const int steps = 16 * n;
    const auto defect = [&prob, steps](double a, double b, IvpResult* traj = nullptr) {
        IvpResult r = integrate_ivp(prob, a, b, steps);
        if (traj) *traj = std::move(r);
        const IvpResult& use = traj ? *traj : r;
        return State{use.x1 - a, use.v1 - b};
    };

    SolveResult res;
    res.method = "shooting";
    double a = x0, b = v0;
    State F = defect(a, b);
    double norm = std::max(std::fabs(F.x), std::fabs(F.v));
    bool converged = false;
    int it = 0;
    for (; it < max_iter; ++it) {
        res.history.push_back(norm);
        if (norm <= tol * (1 + std::fabs(a) + std::fabs(b))) {
            converged = true;
            break;
        }
        const double step = 1e-7 * (1 + std::fabs(a) + std::fabs(b));
        const State Fa = defect(a + step, b);
        const State Fb = defect(a, b + step);
        const double j00 = (Fa.x - F.x) / step, j01 = (Fb.x - F.x) / step;
        const double j10 = (Fa.v - F.v) / step, j11 = (Fb.v - F.v) / step;
        const double det = j00 * j11 - j01 * j10;
        if (!std::isfinite(det) || std::fabs(det) < 1e-300)
            throw std::runtime_error("shoot_periodic: singular periodicity Jacobian");
        const double da = (-F.x * j11 + F.v * j01) / det;
        const double db = (F.x * j10 - F.v * j00) / det;

        double lam = 1.0;
        bool accepted = false;
        for (int back = 0; back < 8; ++back, lam *= 0.5) {
            const State Ft = defect(a + lam * da, b + lam * db);
            const double nt = std::max(std::fabs(Ft.x), std::fabs(Ft.v));
            if (std::isfinite(nt) && nt < (1 - 0.25 * lam) * norm) {
                a += lam * da;
                b += lam * db;
                F = Ft;
                norm = nt;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;  // stalled
    }

    IvpResult final_traj;
    defect(a, b, &final_traj);
    res.x.n = n;
    res.x.periodic = true;
    res.x.values.resize(n + 1);
    res.x.derivative.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        res.x.values[i] = final_traj.trajectory.values[16 * i];
        res.x.derivative[i] = final_traj.trajectory.derivative[16 * i];
    }
    res.converged = converged;
    res.iterations = it;
    res.residual = residual(prob, res.x);
    return res;
}

double verify_h_by_ivp(const LinearParams& p, int steps) {
    const auto rhs = [&p](double, double x, double v) { return p.a * x - p.b * v; };
    const IvpResult u1 = run_ivp(rhs, 1.0, 0.0, steps);
    const IvpResult u2 = run_ivp(rhs, 0.0, 1.0, steps);

    // [u1(1)-1  u2(1)  ] [h0 ]   [0]
    // [u1'(1)   u2'(1)-1] [h0'] = [1]
    const double m00 = u1.x1 - 1, m01 = u2.x1;
    const double m10 = u1.v1, m11 = u2.v1 - 1;
    const double det = m00 * m11 - m01 * m10;
    if (!std::isfinite(det) || std::fabs(det) < 1e-300)
        throw std::runtime_error("verify_h_by_ivp: periodicity system is singular");
    const double h0 = -m01 / det;
    const double h0p = m00 / det;

    double worst = 0;
    for (int k = 0; k <= 32; ++k) {
        const int i = k * (steps / 32);
        const double t = static_cast<double>(i) / steps;
        const double via_ivp = h0 * u1.trajectory.values[i] + h0p * u2.trajectory.values[i];
        worst = std::max(worst, std::fabs(via_ivp - h_eval(p, t)));
    }
    return worst;
}

}  // namespace pbvp

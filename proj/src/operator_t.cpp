#include "pbvp/operator_t.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pbvp/quadrature.hpp"

namespace pbvp {

namespace {

struct KernelRows {
    std::vector<double> H, Hp, Hpp;  // h, h', h'' at the grid nodes
};

KernelRows kernel_rows(const LinearParams& p, int n) {
    KernelRows k;
    k.H.resize(n + 1);
    k.Hp.resize(n + 1);
    k.Hpp.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        double t = static_cast<double>(i) / n;
        k.H[i] = h_eval(p, t);
        k.Hp[i] = h_prime_eval(p, t);
        k.Hpp[i] = p.a * k.H[i] - p.b * k.Hp[i];
    }
    return k;
}

}  // namespace

GridFunction apply_T(const ProblemDef& prob, const LinearParams& p, const GridFunction& eta) {
    eta.validate();
    if (!eta.periodic) throw std::invalid_argument("apply_T: eta must be periodic");
    if (!eta.has_derivative()) throw std::invalid_argument("apply_T: eta needs derivative values");
    const int n = eta.n;

    std::vector<double> w(n + 1);
    for (int i = 0; i <= n; ++i) {
        double t = eta.t(i);
        w[i] = prob.eval(t, eta.values[i], eta.derivative[i]) + p.a * eta.values[i] -
               p.b * eta.derivative[i];
        if (!std::isfinite(w[i]))
            throw std::runtime_error("apply_T: non-finite forcing at t=" + std::to_string(t));
    }
    GridFunction wg;
    wg.n = n;
    wg.values = w;
    std::vector<double> wp = differentiate(wg).values;

    KernelRows k = kernel_rows(p, n);
    GridFunction out;
    out.n = n;
    out.values = kernel_apply(k.H, k.Hp, w, wp, n);
    out.derivative = kernel_apply(k.Hp, k.Hpp, w, wp, n);
    out.periodic = true;
    out.validate();
    return out;
}

double residual(const ProblemDef& prob, const GridFunction& x) {
    x.validate();
    if (!x.has_derivative()) throw std::invalid_argument("residual: x needs derivative values");
    GridFunction xp;
    xp.n = x.n;
    xp.values = x.derivative;
    xp.periodic = x.periodic;
    GridFunction xpp = differentiate(xp);

    double r = 0.0;
    for (int i = 1; i < x.n; ++i)
        r = std::max(r, std::abs(xpp.values[i] + prob.eval(x.t(i), x.values[i], x.derivative[i])));
    r = std::max(r, std::abs(x.values[x.n] - x.values[0]));
    r = std::max(r, std::abs(x.derivative[x.n] - x.derivative[0]));
    return r;
}

double MmnnReport::max() const { return std::max({dev_m, dev_M, dev_n, dev_N}); }

MmnnReport mMnN_identity_check(const Bracket& br, const LinearParams& p, double Delta) {
    const int n = br.alpha.n;
    const double a = p.a, b = p.b, k0 = p.k0;
    KernelRows k = kernel_rows(p, n);

    // kernel rows for the slope bounds: h' + k0 h and its derivative
    std::vector<double> G2(n + 1), G2p(n + 1);
    for (int i = 0; i <= n; ++i) {
        G2[i] = k.Hp[i] + k0 * k.H[i];
        G2p[i] = k.Hpp[i] + k0 * k.Hp[i];
    }

    auto forcing = [&](const GridFunction& g, double shift) {
        std::vector<double> w(n + 1);
        for (int i = 0; i <= n; ++i)
            w[i] = -g.second[i] + a * g.values[i] - b * g.derivative[i] + shift;
        return w;
    };
    auto diff_of = [&](const std::vector<double>& w) {
        GridFunction g;
        g.n = n;
        g.values = w;
        return differentiate(g).values;
    };

    std::vector<double> wa = forcing(br.alpha, -Delta);
    std::vector<double> wb = forcing(br.beta, Delta);
    std::vector<double> wap = diff_of(wa), wbp = diff_of(wb);

    std::vector<double> m = kernel_apply(k.H, k.Hp, wa, wap, n);
    std::vector<double> M = kernel_apply(k.H, k.Hp, wb, wbp, n);
    std::vector<double> nn = kernel_apply(G2, G2p, wa, wap, n);
    std::vector<double> NN = kernel_apply(G2, G2p, wb, wbp, n);

    MmnnReport rep;
    for (int i = 0; i <= n; ++i) {
        double h = k.H[i], hp = k.Hp[i];
        double m_ref = br.alpha.values[i] + br.r1 * h - Delta / a;
        double M_ref = br.beta.values[i] - br.r2 * h + Delta / a;
        double n_ref = br.alpha.derivative[i] + k0 * br.alpha.values[i] +
                       br.r1 * (k0 * h + hp) - k0 * Delta / a;
        double N_ref = br.beta.derivative[i] + k0 * br.beta.values[i] -
                       br.r2 * (k0 * h + hp) + k0 * Delta / a;
        rep.dev_m = std::max(rep.dev_m, std::abs(m[i] - m_ref));
        rep.dev_M = std::max(rep.dev_M, std::abs(M[i] - M_ref));
        rep.dev_n = std::max(rep.dev_n, std::abs(nn[i] - n_ref));
        rep.dev_N = std::max(rep.dev_N, std::abs(NN[i] - N_ref));
    }
    return rep;
}

}  // namespace pbvp

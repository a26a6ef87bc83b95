#include "pbvp/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "pbvp/quadrature.hpp"

namespace pbvp {

namespace {

// 1 - e^{-lambda1} and 1 - e^{lambda2}, both in (0,1)
double e1m(const LinearParams& p) { return -std::expm1(-p.lambda1); }
double e2m(const LinearParams& p) { return -std::expm1(p.lambda2); }

void check_t(double t) {
    if (t < -1e-12 || t > 1.0 + 1e-12)
        throw std::domain_error("kernel: t outside [0,1]: " + std::to_string(t));
}

// common denominator (lambda1 - lambda2)(1 - e^{-l1})(1 - e^{l2})
double denom(const LinearParams& p) { return (p.lambda1 - p.lambda2) * e1m(p) * e2m(p); }

}  // namespace

LinearParams make_params(double a, double b) {
    if (!(a > 0) || !std::isfinite(a) || !std::isfinite(b))
        throw std::domain_error("make_params: requires finite a > 0, b");
    LinearParams p;
    p.a = a;
    p.b = b;
    double s = std::sqrt(b * b + 4.0 * a);
    if (b >= 0) {
        p.lambda2 = (-b - s) / 2.0;
        p.lambda1 = -a / p.lambda2;
    } else {
        p.lambda1 = (-b + s) / 2.0;
        p.lambda2 = -a / p.lambda1;
    }
    // k0 = -(l1 (1 - e^{l2}) + l2 (e^{l1} - 1)) / (e^{l1} - e^{l2}),
    // evaluated with everything divided by e^{l1}
    double d = -std::expm1(p.lambda2 - p.lambda1);
    p.k0 = -(p.lambda1 * e2m(p) * std::exp(-p.lambda1) + p.lambda2 * e1m(p)) / d;
    if (!(p.k0 > 0) || !(p.k0 <= -p.lambda2 * (1.0 + 1e-12)))
        throw std::domain_error("make_params: k0 outside (0, -lambda2]");
    return p;
}

double h_eval(const LinearParams& p, double t) {
    check_t(t);
    return (e2m(p) * std::exp(p.lambda1 * (t - 1.0)) + e1m(p) * std::exp(p.lambda2 * t)) / denom(p);
}

double h_prime_eval(const LinearParams& p, double t) {
    check_t(t);
    return (p.lambda1 * e2m(p) * std::exp(p.lambda1 * (t - 1.0)) +
            p.lambda2 * e1m(p) * std::exp(p.lambda2 * t)) /
           denom(p);
}

double h_second_eval(const LinearParams& p, double t) {
    check_t(t);
    return (p.lambda1 * p.lambda1 * e2m(p) * std::exp(p.lambda1 * (t - 1.0)) +
            p.lambda2 * p.lambda2 * e1m(p) * std::exp(p.lambda2 * t)) /
           denom(p);
}

double h1_eval(const LinearParams& p, double t) { return h_prime_eval(p, t) / h_eval(p, t); }

Matrix2 fundamental_matrix(const LinearParams& p, double t) {
    check_t(t);
    double l1 = p.lambda1, l2 = p.lambda2, k0 = p.k0;
    double E1 = std::exp(l1 * t), E2 = std::exp(l2 * t);
    double inv = 1.0 / (l1 - l2);
    // Factored through E1 - E2 so A(0) comes out as the identity exactly.
    double dE = E1 - E2;
    Matrix2 A;
    A.m00 = E2 - inv * (l2 + k0) * dE;
    A.m01 = inv * dE;
    A.m10 = -(l1 + k0) * (l2 + k0) * inv * dE;
    A.m11 = E2 + inv * (l1 + k0) * dE;
    return A;
}

Matrix2 periodicity_resolvent(const LinearParams& p) {
    double l1 = p.lambda1, l2 = p.lambda2;
    double E1 = std::exp(l1), E2 = std::exp(l2);
    Matrix2 R;
    R.m00 = (E1 + E2 - 2.0) / ((E1 - 1.0) * (1.0 - E2));
    R.m01 = -(E1 - E2) / ((l1 - l2) * (E1 - 1.0) * (1.0 - E2));
    R.m10 = -(l1 - l2) / (E1 - E2);
    R.m11 = 0.0;
    return R;
}

GridFunction theta1_from_u(const LinearParams& p, const GridFunction& u) {
    u.validate();
    const int n = u.n;
    // kernel K(x) = (e^{l1 x} - e^{l2 x}) / (e^{l1} - e^{l2}), factored by e^{l1}
    double d = -std::expm1(p.lambda2 - p.lambda1);
    std::vector<double> K(n + 1), Kp(n + 1);
    for (int i = 0; i <= n; ++i) {
        double x = static_cast<double>(i) / n;
        double a1 = std::exp(p.lambda1 * (x - 1.0));
        double a2 = std::exp(p.lambda2 * x - p.lambda1);
        K[i] = (a1 - a2) / d;
        Kp[i] = (p.lambda1 * a1 - p.lambda2 * a2) / d;
    }
    GridFunction w = u;
    if (!w.has_derivative()) w.derivative = differentiate(u).values;
    std::vector<double> vals = kernel_apply(K, Kp, w.values, w.derivative, n);
    for (double& v : vals) v = -v;
    GridFunction out;
    out.n = n;
    out.values = std::move(vals);
    out.periodic = true;
    out.validate();
    return out;
}

}  // namespace pbvp

#pragma once

#include "pbvp/grid_function.hpp"

namespace pbvp {

/// Characteristic data of the shifted linear operator -x'' + a x - b x'.
/// lambda1 > 0 > lambda2 are the roots of z^2 + b z - a = 0 and k0 is the
/// decay rate -h'(0)/h(0) of the periodic kernel below.
struct LinearParams {
    double a = 0;
    double b = 0;
    double lambda1 = 0;
    double lambda2 = 0;
    double k0 = 0;
};

struct Matrix2 {
    double m00 = 0, m01 = 0, m10 = 0, m11 = 0;
    Matrix2 operator*(const Matrix2& o) const {
        return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
                m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
    }
};

/// Requires a > 0.  Roots are computed cancellation-free (larger-magnitude
/// root from the quadratic formula, the other via lambda1*lambda2 = -a).
LinearParams make_params(double a, double b);

/// Periodic kernel of -x'' + a x - b x': positive on [0,1], h(0) = h(1),
/// with unit derivative jump h'(1) - h'(0) = 1.  All evaluators factor the
/// exponentials as exp(lambda1 (t-1)) so large lambda1 cannot overflow even
/// though exp(lambda1) would.
double h_eval(const LinearParams& p, double t);
double h_prime_eval(const LinearParams& p, double t);
double h_second_eval(const LinearParams& p, double t);

/// Logarithmic slope h'(t)/h(t); strictly increasing, equals -k0 at t = 0.
double h1_eval(const LinearParams& p, double t);

/// Fundamental matrix A(t) of the first order system
///   theta'  = -k0 theta + theta1
///   theta1' = (a - k0 (k0 - b)) theta + (k0 - b) theta1
/// with A(0) = I.  Entries grow like exp(lambda1 t); intended for moderate
/// parameters.
Matrix2 fundamental_matrix(const LinearParams& p, double t);

/// Closed form of (I - A(1))^{-1}.  Entry (1,1) [row 2, col 2] is exactly 0.
Matrix2 periodicity_resolvent(const LinearParams& p);

/// Second component of the periodic solution of the system above with
/// inhomogeneity (0, u):
///   theta1(t) = -1/(e^{l1} - e^{l2}) * (int_0^t + int_t^1) (e^{l1 x} - e^{l2 x}) u ds
/// with x = t - s resp. 1 + t - s.  u <= 0 implies theta1 >= 0.
GridFunction theta1_from_u(const LinearParams& p, const GridFunction& u);

}  // namespace pbvp

#pragma once

#include "pbvp/bracket.hpp"
#include "pbvp/grid_function.hpp"
#include "pbvp/kernel.hpp"
#include "pbvp/problem.hpp"

namespace pbvp {

/// One application of the integral operator
///   x(t) = (int_0^t h(t-s) + int_t^1 h(1+t-s)) (f(s,eta,eta') + a eta - b eta') ds
/// with the derivative row using h' (and the kernel identity
/// h'' = a h - b h' for the slope corrections).  The result is the periodic
/// solution of -x'' = f(t,eta,eta') - a(x - eta) + b(x' - eta') and comes
/// back with derivative values filled and x(1) == x(0) exactly.
GridFunction apply_T(const ProblemDef& prob, const LinearParams& p, const GridFunction& eta);

/// Max interior defect |x'' + f(t,x,x')| (x'' from differentiating the
/// derivative array) combined with the periodicity defects |x(1)-x(0)| and
/// |x'(1)-x'(0)|.
double residual(const ProblemDef& prob, const GridFunction& x);

struct MmnnReport {
    double dev_m = 0;   // envelope floor
    double dev_M = 0;   // envelope ceiling
    double dev_n = 0;   // slope floor
    double dev_N = 0;   // slope ceiling
    double max() const;
};

/// Rebuilds the four envelope bounds by direct kernel quadrature against the
/// bracket's defect forcings and reports max deviation from the closed
/// forms
///   m = alpha + r1 h - Delta/a            n = alpha' + k0 alpha + r1 (k0 h + h') - k0 Delta/a
///   M = beta  - r2 h + Delta/a            N = beta'  + k0 beta  - r2 (k0 h + h') + k0 Delta/a
MmnnReport mMnN_identity_check(const Bracket& br, const LinearParams& p, double Delta);

}  // namespace pbvp

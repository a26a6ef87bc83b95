#pragma once

#include <vector>

namespace pbvp {

/// Integral of m uniform cells given samples g[0..m] and slope samples
/// gp[0..m] (spacing dx).  Composite Simpson; an odd cell count is finished
/// with one trapezoid cell carrying the Euler-Maclaurin slope correction,
/// which keeps the rule 4th order.
double integrate_piece(const double* g, const double* gp, int m, double dx);

/// Split convolution against a 1-periodic kernel on the uniform grid:
///
///   out[k] = int_0^{t_k} G(t_k - s) w(s) ds + int_{t_k}^1 G(1 + t_k - s) w(s) ds
///
/// G, Gp hold kernel values and kernel derivative at i/n for i = 0..n; w, wp
/// hold the forcing and its derivative likewise.  Both split pieces land on
/// whole cells for every k, and the integrand's slope in s is assembled from
/// Gp and wp for the odd-cell corrections.  out[n] == out[0] exactly.
std::vector<double> kernel_apply(const std::vector<double>& G, const std::vector<double>& Gp,
                                 const std::vector<double>& w, const std::vector<double>& wp,
                                 int n);

/// Number of worker threads honored by kernel_apply and the condition
/// scanners: PBVP_THREADS when set (>=1), else 1.
int worker_threads();

}  // namespace pbvp

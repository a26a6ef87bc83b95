#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pbvp {

/// Scalar function on the uniform grid t_i = i/n over [0,1].
///
/// values has n+1 entries (both endpoints stored).  derivative and second
/// are optional companion arrays of the same length.  n must be even and
/// at least 16 so that composite Simpson weights and the wide difference
/// stencils always fit.
struct GridFunction {
    int n = 0;
    std::vector<double> values;
    std::vector<double> derivative;  // empty when absent
    std::vector<double> second;      // empty when absent
    bool periodic = false;

    double t(int i) const { return static_cast<double>(i) / n; }
    double dx() const { return 1.0 / n; }
    bool has_derivative() const { return !derivative.empty(); }
    bool has_second() const { return !second.empty(); }

    /// Validates grid size, finiteness, array lengths, and (when tagged
    /// periodic) endpoint agreement within 1e-8*(1+max|values|).
    void validate() const;
};

GridFunction make_grid_function(int n, std::vector<double> values, bool periodic = false);

/// Evaluate fn at every node.  A throwing fn is reported together with the
/// offending t.
GridFunction sample(int n, const std::function<double(double)>& fn, bool periodic = false);

/// sample() plus an analytic derivative array.
GridFunction sample_with_derivative(int n, const std::function<double(double)>& fn,
                                    const std::function<double(double)>& dfn,
                                    bool periodic = false);

/// Nodewise derivative by 4th order differences.  Periodic functions use
/// wrap-around central stencils everywhere; otherwise one-sided stencils
/// cover the four boundary nodes.
GridFunction differentiate(const GridFunction& f);

/// Composite Simpson over [0,1].
double integrate(const GridFunction& f);

/// Antiderivative on the grid, F(0) = 0.  Each cell uses the trapezoid rule
/// with the Euler-Maclaurin derivative correction, so the result stays
/// 4th order accurate.  Uses f.derivative when present, else an internal
/// differentiate().
GridFunction cumulative_integral(const GridFunction& f);

/// Pointwise value at arbitrary t in [0,1]: cubic Hermite on the enclosing
/// cell when a derivative array is present, else cubic Lagrange through the
/// four nearest nodes.
double interp(const GridFunction& f, double t);

/// CSV with header t,value[,derivative]; 17 significant digits per field.
std::string to_csv(const GridFunction& f);
GridFunction from_csv(const std::string& text);

void write_csv_file(const GridFunction& f, const std::string& path);

}  // namespace pbvp

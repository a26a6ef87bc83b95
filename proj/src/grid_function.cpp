#include "pbvp/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pbvp {

namespace {

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

void require_finite(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

}  // namespace

void GridFunction::validate() const {
    if (n < 16 || n % 2 != 0)
        throw std::invalid_argument("GridFunction: n must be even and >= 16, got " + std::to_string(n));
    if (static_cast<int>(values.size()) != n + 1)
        throw std::invalid_argument("GridFunction: values must have n+1 entries");
    if (!derivative.empty() && static_cast<int>(derivative.size()) != n + 1)
        throw std::invalid_argument("GridFunction: derivative length mismatch");
    if (!second.empty() && static_cast<int>(second.size()) != n + 1)
        throw std::invalid_argument("GridFunction: second-derivative length mismatch");
    require_finite(values, "GridFunction values");
    if (!derivative.empty()) require_finite(derivative, "GridFunction derivative");
    if (!second.empty()) require_finite(second, "GridFunction second");
    if (periodic) {
        double atol = 1e-8 * (1.0 + max_abs(values));
        if (std::abs(values.front() - values.back()) > atol)
            throw std::invalid_argument("GridFunction: periodic tag but endpoints differ");
    }
}

GridFunction make_grid_function(int n, std::vector<double> values, bool periodic) {
    GridFunction f;
    f.n = n;
    f.values = std::move(values);
    f.periodic = periodic;
    f.validate();
    return f;
}

GridFunction sample(int n, const std::function<double(double)>& fn, bool periodic) {
    GridFunction f;
    f.n = n;
    f.values.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        double t = static_cast<double>(i) / n;
        try {
            f.values[i] = fn(t);
        } catch (const std::exception& e) {
            throw std::runtime_error("sample: evaluation failed at t=" + std::to_string(t) + ": " + e.what());
        }
        if (!std::isfinite(f.values[i]))
            throw std::runtime_error("sample: non-finite value at t=" + std::to_string(t));
    }
    f.periodic = periodic;
    f.validate();
    return f;
}

GridFunction sample_with_derivative(int n, const std::function<double(double)>& fn,
                                    const std::function<double(double)>& dfn, bool periodic) {
    GridFunction f = sample(n, fn, periodic);
    f.derivative.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        double t = static_cast<double>(i) / n;
        f.derivative[i] = dfn(t);
        if (!std::isfinite(f.derivative[i]))
            throw std::runtime_error("sample: non-finite derivative at t=" + std::to_string(t));
    }
    return f;
}

namespace {

// 4th order first derivative of the raw array.  periodic selects wrap-around
// central stencils (the duplicated endpoint is dropped while wrapping).
std::vector<double> diff4(const std::vector<double>& v, int n, bool periodic) {
    std::vector<double> d(n + 1);
    const double s = n / 12.0;  // 1/(12 dx)
    if (periodic) {
        auto at = [&](int i) { return v[((i % n) + n) % n]; };
        for (int i = 0; i < n; ++i)
            d[i] = s * (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2));
        d[n] = d[0];
        return d;
    }
    for (int i = 2; i <= n - 2; ++i)
        d[i] = s * (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]);
    d[0] = s * (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]);
    d[1] = s * (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]);
    d[n - 1] = s * (3.0 * v[n] + 10.0 * v[n - 1] - 18.0 * v[n - 2] + 6.0 * v[n - 3] - v[n - 4]);
    d[n] = s * (25.0 * v[n] - 48.0 * v[n - 1] + 36.0 * v[n - 2] - 16.0 * v[n - 3] + 3.0 * v[n - 4]);
    return d;
}

}  // namespace

GridFunction differentiate(const GridFunction& f) {
    f.validate();
    GridFunction g;
    g.n = f.n;
    g.periodic = f.periodic;
    g.values = diff4(f.values, f.n, f.periodic);
    return g;
}

double integrate(const GridFunction& f) {
    f.validate();
    if (f.n % 2 != 0) throw std::invalid_argument("integrate: n must be even");
    double odd = 0.0, even = 0.0;
    for (int i = 1; i < f.n; i += 2) odd += f.values[i];
    for (int i = 2; i < f.n; i += 2) even += f.values[i];
    return (f.values[0] + f.values[f.n] + 4.0 * odd + 2.0 * even) / (3.0 * f.n);
}

GridFunction cumulative_integral(const GridFunction& f) {
    f.validate();
    const std::vector<double>& g = f.values;
    std::vector<double> gp = f.has_derivative() ? f.derivative : diff4(f.values, f.n, f.periodic);
    const double dx = f.dx();
    std::vector<double> c(f.n + 1);
    c[0] = 0.0;
    for (int i = 0; i < f.n; ++i)
        c[i + 1] = c[i] + 0.5 * dx * (g[i] + g[i + 1]) - dx * dx / 12.0 * (gp[i + 1] - gp[i]);
    GridFunction out;
    out.n = f.n;
    out.values = std::move(c);
    out.derivative = g;
    return out;
}

double interp(const GridFunction& f, double t) {
    f.validate();
    if (t < -1e-12 || t > 1.0 + 1e-12)
        throw std::domain_error("interp: t outside [0,1]: " + std::to_string(t));
    t = std::clamp(t, 0.0, 1.0);
    const int n = f.n;
    const double dx = f.dx();
    int cell = std::min(static_cast<int>(t * n), n - 1);

    if (f.has_derivative()) {
        // cubic Hermite on [t_cell, t_cell+1]
        double u = (t - cell * dx) / dx;
        double y0 = f.values[cell], y1 = f.values[cell + 1];
        double m0 = f.derivative[cell] * dx, m1 = f.derivative[cell + 1] * dx;
        double u2 = u * u, u3 = u2 * u;
        return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * m0 +
               (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * m1;
    }

    // cubic Lagrange through the four nearest nodes
    int i0 = std::clamp(cell - 1, 0, n - 3);
    double r = 0.0;
    for (int j = 0; j < 4; ++j) {
        double lj = 1.0;
        double tj = (i0 + j) * dx;
        for (int k = 0; k < 4; ++k) {
            if (k == j) continue;
            double tk = (i0 + k) * dx;
            lj *= (t - tk) / (tj - tk);
        }
        r += lj * f.values[i0 + j];
    }
    return r;
}

namespace {

void append17(std::string& out, double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out += buf;
}

}  // namespace

std::string to_csv(const GridFunction& f) {
    f.validate();
    std::string out = f.has_derivative() ? "t,value,derivative\n" : "t,value\n";
    for (int i = 0; i <= f.n; ++i) {
        append17(out, f.t(i));
        out += ',';
        append17(out, f.values[i]);
        if (f.has_derivative()) {
            out += ',';
            append17(out, f.derivative[i]);
        }
        out += '\n';
    }
    return out;
}

GridFunction from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("from_csv: empty input");
    bool with_deriv = line.find("derivative") != std::string::npos;
    std::vector<double> vals, derivs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<double> cols;
        while (std::getline(row, field, ',')) cols.push_back(std::stod(field));
        if (cols.size() < 2u + (with_deriv ? 1u : 0u))
            throw std::invalid_argument("from_csv: short row: " + line);
        vals.push_back(cols[1]);
        if (with_deriv) derivs.push_back(cols[2]);
    }
    if (vals.size() < 17) throw std::invalid_argument("from_csv: too few rows");
    GridFunction f;
    f.n = static_cast<int>(vals.size()) - 1;
    f.values = std::move(vals);
    f.derivative = std::move(derivs);
    f.validate();
    return f;
}

void write_csv_file(const GridFunction& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << to_csv(f);
}

}  // namespace pbvp

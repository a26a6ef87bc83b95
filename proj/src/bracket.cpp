#include "pbvp/bracket.hpp"

#include <cmath>
#include <stdexcept>

namespace pbvp {

Bracket make_bracket(GridFunction alpha, GridFunction beta) {
    alpha.validate();
    beta.validate();
    if (alpha.n != beta.n) throw std::invalid_argument("make_bracket: grid mismatch");
    if (!alpha.has_derivative() || !alpha.has_second() || !beta.has_derivative() || !beta.has_second())
        throw std::invalid_argument("make_bracket: alpha, beta need first and second derivatives");
    auto endpoint_gap = [](const GridFunction& g) {
        double atol = 1e-8;
        for (double v : g.values) atol = std::max(atol, 1e-8 * std::abs(v));
        return std::abs(g.values.front() - g.values.back()) > atol;
    };
    if (endpoint_gap(alpha) || endpoint_gap(beta))
        throw std::invalid_argument("make_bracket: endpoint values must match (x(0) = x(1))");

    Bracket br;
    br.r1 = alpha.derivative.front() - alpha.derivative.back();
    br.r2 = beta.derivative.back() - beta.derivative.front();
    br.alpha = std::move(alpha);
    br.beta = std::move(beta);
    return br;
}

Bracket bracket_from_closures(int n, const std::function<double(double)>& a,
                              const std::function<double(double)>& ap,
                              const std::function<double(double)>& app,
                              const std::function<double(double)>& b,
                              const std::function<double(double)>& bp,
                              const std::function<double(double)>& bpp) {
    GridFunction alpha = sample_with_derivative(n, a, ap);
    alpha.second = sample(n, app).values;
    GridFunction beta = sample_with_derivative(n, b, bp);
    beta.second = sample(n, bpp).values;
    return make_bracket(std::move(alpha), std::move(beta));
}

Bracket bracket_from_grids(const GridFunction& alpha, const GridFunction& beta) {
    GridFunction a = alpha, b = beta;
    if (!a.has_derivative()) a.derivative = differentiate(a).values;
    if (!a.has_second()) {
        GridFunction d;
        d.n = a.n;
        d.values = a.derivative;
        d.periodic = false;  // slopes of a lower/upper solution need not match up
        a.second = differentiate(d).values;
    }
    if (!b.has_derivative()) b.derivative = differentiate(b).values;
    if (!b.has_second()) {
        GridFunction d;
        d.n = b.n;
        d.values = b.derivative;
        d.periodic = false;
        b.second = differentiate(d).values;
    }
    return make_bracket(std::move(a), std::move(b));
}

}  // namespace pbvp

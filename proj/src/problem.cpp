#include "pbvp/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace pbvp {

double ProblemDef::eval(double t, double x, double y) const {
    if (!f) throw std::logic_error("ProblemDef: f not set");
    return f(t, x, y);
}

double ProblemDef::dfdx(double t, double x, double y) const {
    if (fx) return fx(t, x, y);
    double h = 1e-6 * (1.0 + std::abs(x));
    return (eval(t, x + h, y) - eval(t, x - h, y)) / (2.0 * h);
}

double ProblemDef::dfdy(double t, double x, double y) const {
    if (fy) return fy(t, x, y);
    double h = 1e-6 * (1.0 + std::abs(y));
    return (eval(t, x, y + h) - eval(t, x, y - h)) / (2.0 * h);
}

}  // namespace pbvp

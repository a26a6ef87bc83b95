#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "pbvp/oracle.hpp"
#include "pbvp/problems.hpp"

using namespace pbvp;

namespace {
constexpr double kTwoPi = 6.28318530717958647692528676656;
constexpr double kCosh1 = 1.543080634815243778477906;
constexpr double kSinh1 = 1.175201193643801456882382;
constexpr double kCos1 = 0.540302305868139717400936607443;
constexpr double kSin1 = 0.84147098480789650665250232163;
constexpr double kLinAmp = 0.0229999170875938081139504028721;  // 1/(4 + 4 pi^2)
constexpr double kRestPoint = 2.61799387799149436538553615273;  // 5 pi / 6
}  // namespace

TEST_CASE("time stepping hits hyperbolic and trigonometric flows") {
    ProblemDef grow;
    grow.f = [](double, double x, double) { return -x; };  // x'' = x
    const IvpResult up = integrate_ivp(grow, 1.0, 0.0, 4096);
    CHECK(std::fabs(up.x1 - kCosh1) < 1e-12);
    CHECK(std::fabs(up.v1 - kSinh1) < 1e-12);

    ProblemDef swing;
    swing.f = [](double, double x, double) { return x; };  // x'' = -x
    const IvpResult round = integrate_ivp(swing, 1.0, 0.0, 4096);
    CHECK(std::fabs(round.x1 - kCos1) < 1e-12);
    CHECK(std::fabs(round.v1 + kSin1) < 1e-12);

    CHECK_THROWS_AS(integrate_ivp(grow, 1.0, 0.0, 3), std::invalid_argument);
}

TEST_CASE("time stepping reports finite-time escape") {
    ProblemDef cubic;
    cubic.f = [](double, double x, double) { return -x * x * x; };  // x'' = x^3
    bool threw = false;
    try {
        integrate_ivp(cubic, 2.0, 0.0, 4096);
    } catch (const std::runtime_error& e) {
        threw = std::string(e.what()).find("blew up") != std::string::npos;
    }
    CHECK(threw);
}

TEST_CASE("shooting recovers the closed-form linear solution") {
    ProblemDef prob;
    prob.f = [](double t, double x, double) { return -4.0 * x - std::cos(kTwoPi * t); };
    const SolveResult res = shoot_periodic(prob, 0.0, 0.0, 256);
    CHECK(res.converged);
    CHECK(res.method == "shooting");
    CHECK(!res.history.empty());
    double worst = 0;
    for (int i = 0; i <= 256; ++i)
        worst = std::max(worst,
                         std::fabs(res.x.values[i] + kLinAmp * std::cos(kTwoPi * res.x.t(i))));
    CHECK(worst < 1e-9);
    CHECK(res.residual < 1e-7);  // difference-stencil defect on the subsampled grid

    CHECK_THROWS_AS(shoot_periodic(prob, 0.0, 0.0, 8), std::invalid_argument);
}

TEST_CASE("shooting lands on the pendulum rest point from a perturbed start") {
    PendulumSpec spec;
    spec.mu = sample(64, [](double) { return 2.0; }, true);
    spec.e = sample(64, [](double) { return 1.0; }, true);
    spec.ell = [](double, double) { return 2.0; };
    spec.r = 1.0;
    const BuiltProblem built = build_pendulum(spec);
    const SolveResult res = shoot_periodic(built.prob, 2.7, 0.0, 256);
    CHECK(res.converged);
    for (double v : res.x.values) CHECK(std::fabs(v - kRestPoint) < 1e-10);
}

TEST_CASE("shooting accepts the resonant flow where every start is periodic") {
    ProblemDef resonant;
    resonant.f = [](double, double x, double) { return kTwoPi * kTwoPi * x; };  // x'' = -(2pi)^2 x
    const SolveResult res = shoot_periodic(resonant, 0.7, 0.3, 256);
    CHECK(res.converged);
    CHECK(res.iterations == 0);
    double worst = 0;
    for (int i = 0; i <= 256; ++i) {
        const double t = res.x.t(i);
        const double exact = 0.7 * std::cos(kTwoPi * t) + 0.3 / kTwoPi * std::sin(kTwoPi * t);
        worst = std::max(worst, std::fabs(res.x.values[i] - exact));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("shooting refuses a defect with no initial-data dependence") {
    ProblemDef prob;
    prob.f = [](double, double, double) { return 1.0; };  // x(1)-x(0) never depends on x0
    bool threw = false;
    try {
        shoot_periodic(prob, 0.0, 0.0, 64);
    } catch (const std::runtime_error& e) {
        threw = std::string(e.what()).find("singular periodicity Jacobian") != std::string::npos;
    }
    CHECK(threw);
}

TEST_CASE("independent time-stepped reconstruction matches the closed-form kernel") {
    CHECK(verify_h_by_ivp(make_params(2.0, 1.0)) < 1e-8);
    CHECK(verify_h_by_ivp(make_params(50.0, -3.0)) < 1e-8);
    CHECK(verify_h_by_ivp(make_params(200.0, 5.0)) < 1e-8);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "pbvp/certify.hpp"
#include "pbvp/problems.hpp"

using namespace pbvp;

namespace {
constexpr double kTwoPi = 6.28318530717958647692528676656;
constexpr double kPi = 3.14159265358979323846;
// 1/(8 pi^2) and 0.3/(4 pi^2), to 30 digits
constexpr double kInvEightPiSq = 0.0126651479552922214304849329012;
constexpr double kBetaOscAmp = 0.00759908877317533285829095974073;

GridFunction const_grid(int n, double v) { return sample(n, [v](double) { return v; }, true); }

GridFunction lazer_forcing(int n) {
    return sample_with_derivative(
        n, [](double t) { return 1.0 + 0.5 * std::sin(kTwoPi * t); },
        [](double t) { return 0.5 * kTwoPi * std::cos(kTwoPi * t); }, true);
}
}  // namespace

TEST_CASE("pendulum admissibility guards") {
    PendulumSpec spec;
    spec.mu = const_grid(64, 2.0);
    spec.e = const_grid(64, 1.0);
    spec.ell = [](double, double) { return 2.0; };
    spec.r = 1.0;
    CHECK_NOTHROW(build_pendulum(spec));

    PendulumSpec weak = spec;
    weak.e = const_grid(64, 2.5);  // forcing overpowers the restoring term
    CHECK_THROWS_AS(pendulum_to_standard(weak), std::invalid_argument);

    PendulumSpec thin = spec;
    thin.r = 0.9;  // r * min ell = 1.8 < mu = 2
    CHECK_THROWS_AS(pendulum_to_standard(thin), std::invalid_argument);

    PendulumSpec shallow = spec;
    shallow.d = 1.0;  // below (1 + pi^2 r^2)^{3/2} max ell
    CHECK_THROWS_AS(build_pendulum(shallow), std::invalid_argument);
}

TEST_CASE("pendulum right side and analytic slope") {
    PendulumSpec spec;
    spec.mu = const_grid(64, 2.0);
    spec.e = const_grid(64, 1.0);
    spec.ell = [](double, double) { return 2.0; };
    spec.r = 1.0;
    const ProblemDef prob = pendulum_to_standard(spec);

    const double t = 0.3, x = 2.0, y = 0.5;
    const double expect = std::pow(1.25, 1.5) * (2.0 * std::sin(x) - 2.0 * y - 1.0);
    CHECK(prob.eval(t, x, y) == doctest::Approx(expect).epsilon(1e-13));

    const double s = 1e-6;
    const double fd = (prob.eval(t, x, y + s) - prob.eval(t, x, y - s)) / (2 * s);
    CHECK(std::fabs(prob.dfdy(t, x, y) - fd) < 1e-5 * (1 + std::fabs(fd)));
    const double fdx = (prob.eval(t, x + s, y) - prob.eval(t, x - s, y)) / (2 * s);
    CHECK(std::fabs(prob.dfdx(t, x, y) - fdx) < 1e-5 * (1 + std::fabs(fdx)));

    const BuiltProblem built = build_pendulum(spec);
    const double d = pendulum_default_d(spec);
    CHECK(d == doctest::Approx(std::pow(1 + kPi * kPi, 1.5) * 2.0).epsilon(1e-13));
    CHECK(built.shift_a == doctest::Approx(d).epsilon(1e-13));
    CHECK(built.shift_b == doctest::Approx(-d).epsilon(1e-13));
    CHECK(built.bracket.alpha.values[0] == doctest::Approx(kPi / 2));
    CHECK(built.bracket.beta.values[0] == doctest::Approx(3 * kPi / 2));
}

TEST_CASE("random admissible pendulums certify end to end") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const double m0 = 1.5 + 1.5 * u01(rng);
        const double m1 = (m0 - 1.0) * 0.8 * u01(rng);
        const double ph = kTwoPi * u01(rng);
        const double e0 = (m0 - m1) * (0.3 + 0.6 * u01(rng));
        const double L0 = 1.0 + 2.0 * u01(rng);
        const double L1 = 0.4 * L0 * u01(rng);

        PendulumSpec spec;
        spec.mu = sample(64, [=](double t) { return m0 + m1 * std::sin(kTwoPi * t + ph); }, true);
        spec.e = sample(64, [=](double t) { return e0 * std::cos(kTwoPi * t); }, true);
        spec.ell = [L0, L1](double, double x) { return L0 + L1 * std::cos(x); };
        spec.r = (m0 + m1) / (L0 - L1) * 1.02;

        const BuiltProblem built = build_pendulum(spec);
        CertifyOptions opt;
        opt.samples = 40;
        opt.seed = 100 + trial;
        const Certificate cert = certify_problem(built, opt);
        if (!cert.all_pass()) {
            for (const auto& r : cert.records)
                MESSAGE(r.name, " pass=", r.pass, " margin=", r.margin);
        }
        CHECK(cert.all_pass());
    }
}

TEST_CASE("upper level for the attractive singular family") {
    const GridFunction e = lazer_forcing(256);
    const GridFunction beta = build_beta_example1(e, 2.0);

    double worst = 0, worst_d = 0;
    for (int i = 0; i <= 256; ++i) {
        const double t = beta.t(i);
        worst = std::max(worst,
                         std::fabs(beta.values[i] - (2.0 - std::sin(kTwoPi * t) * kInvEightPiSq)));
        worst_d = std::max(worst_d, std::fabs(beta.derivative[i] +
                                              kTwoPi * std::cos(kTwoPi * t) * kInvEightPiSq));
    }
    CHECK(worst < 5e-9);
    CHECK(worst_d < 5e-8);
    // assembled curvature is -2 nbar + e by construction
    for (int i = 0; i <= 256; ++i)
        CHECK(beta.second[i] == doctest::Approx(-1.0 + e.values[i]).epsilon(1e-12));
    CHECK(beta.derivative[0] == beta.derivative[256]);

    SingularSpec spec;
    spec.p = const_grid(256, 1.0);
    spec.e = e;
    spec.lambda = 1.0;
    spec.C = 1.6;
    CHECK(std::fabs(choose_m_example1(spec) - (1.0 + kInvEightPiSq)) < 5e-9);

    const BuiltProblem built = build_singular(spec);
    CHECK(built.bracket.r1 == 0.0);
    CHECK(built.bracket.r2 == 0.0);
    CHECK(built.bracket.alpha.values[10] == doctest::Approx(0.625).epsilon(1e-13));
    CHECK(built.shift_a == doctest::Approx(1.0 / (0.625 * 0.625)).epsilon(1e-12));
}

TEST_CASE("singular admissibility guards") {
    SingularSpec spec;
    spec.p = const_grid(64, 1.0);
    spec.e = lazer_forcing(64);
    spec.lambda = 1.0;
    spec.C = 1.6;
    CHECK_NOTHROW(singular_to_standard(spec));

    SingularSpec capped = spec;
    capped.C = 1.0;  // floor 1, but p * 1 < e at the forcing peak
    CHECK_THROWS_AS(singular_to_standard(capped), std::invalid_argument);

    SingularSpec flat = spec;
    flat.lambda = -0.5;
    CHECK_THROWS_AS(singular_to_standard(flat), std::invalid_argument);

    SingularSpec mixed = spec;
    mixed.p = const_grid(32, 1.0);
    CHECK_THROWS_AS(singular_to_standard(mixed), std::invalid_argument);

    SingularSpec pull = spec;
    pull.e = const_grid(64, -0.2);  // mean forcing must be positive
    CHECK_THROWS_AS(singular_to_standard(pull), std::invalid_argument);

    // the frozen branch extends evaluation below the floor
    const ProblemDef prob = singular_to_standard(spec);
    CHECK(prob.eval(0.0, 0.1, 0.0) == prob.eval(0.0, 0.625, 0.0));
    CHECK(prob.dfdx(0.0, 0.1, 0.0) == 0.0);
}

TEST_CASE("slack level and upper level for the sign-changing friction family") {
    DuffingSpec spec;
    spec.p = const_grid(256, 1.0);
    spec.q = const_grid(256, 1.0);
    spec.e = const_grid(256, 1.0);
    spec.g = preset_g_inverse_power(1.0);
    spec.h = preset_h_odd_poly(0.125, 0.5, 1);
    spec.c = 0.7;
    spec.variant = DuffingVariant::example3;

    // -h peaks at 0.3849 on [-2,2]; the midpoint cap picks exactly half of
    // mean(e)/mean(q)
    CHECK(default_n1(spec) == 0.5);
    CHECK(choose_m_example3(spec, 0.5) == 2.5);

    const BuiltProblem built = build_duffing(spec);
    CHECK(built.growth_variant == 1);
    for (double v : built.bracket.beta.values) CHECK(v == 2.5);

    // oscillatory forcing: the level keeps the closed-form response shape
    DuffingSpec osc = spec;
    osc.e = sample_with_derivative(
        256, [](double t) { return 1.0 + 0.3 * std::cos(kTwoPi * t); },
        [](double t) { return -0.3 * kTwoPi * std::sin(kTwoPi * t); }, true);
    const BuiltProblem bosc = build_duffing(osc);
    const GridFunction& beta = bosc.bracket.beta;
    const double m = beta.values[0];
    double worst = 0, worst_d = 0;
    for (int i = 0; i <= 256; ++i) {
        const double t = beta.t(i);
        worst = std::max(worst, std::fabs(beta.values[i] -
                                          (m + kBetaOscAmp * (1.0 - std::cos(kTwoPi * t)))));
        worst_d = std::max(worst_d, std::fabs(beta.derivative[i] -
                                              kBetaOscAmp * kTwoPi * std::sin(kTwoPi * t)));
    }
    CHECK(worst < 5e-9);
    CHECK(worst_d < 5e-8);
    const double ebar = integrate(osc.e);
    for (double d : beta.derivative) CHECK(std::fabs(d) <= 2 * ebar + 1e-9);
}

TEST_CASE("upper level for the nonnegative friction family") {
    DuffingSpec spec;
    spec.p = const_grid(256, 3.0);
    spec.q = const_grid(256, 1.0);
    spec.e = lazer_forcing(256);
    spec.g = preset_g_inverse_power(1.0);
    spec.h = Curve{[](double y) { return std::log1p(y * y); },
                   [](double y) { return 2 * y / (1 + y * y); }};
    spec.c = 0.6;
    spec.variant = DuffingVariant::example2;

    // settle scan: 1/x dips below mean(e)/max(p) = 1/3 from x = 4 onward
    CHECK(std::fabs(choose_m_example2(spec) - (4.0 + kInvEightPiSq)) < 5e-9);

    const BuiltProblem built = build_duffing(spec);
    CHECK(built.growth_variant == 1);
    CHECK(built.bracket.alpha.values[0] == doctest::Approx(0.6));
    CHECK(built.prob.has_split());
    // f1 carries the friction, f2 the spring and forcing
    CHECK(built.prob.f1(0.25, 1.0, 2.0) ==
          doctest::Approx(-std::log1p(4.0)).epsilon(1e-12));
    CHECK(built.prob.f2(0.25, 1.0, 2.0) == doctest::Approx(3.0 - 1.5).epsilon(1e-9));
}

TEST_CASE("duffing admissibility guards") {
    DuffingSpec spec;
    spec.p = const_grid(64, 1.0);
    spec.q = const_grid(64, 1.0);
    spec.e = const_grid(64, 1.0);
    spec.g = preset_g_inverse_power(1.0);
    spec.h = preset_h_odd_poly(0.125, 0.5, 1);
    spec.c = 0.7;
    spec.variant = DuffingVariant::example3;
    CHECK_NOTHROW(duffing_to_standard(spec));

    DuffingSpec bare = spec;
    bare.c = 0.0;
    CHECK_THROWS_AS(duffing_to_standard(bare), std::invalid_argument);

    DuffingSpec starved = spec;
    starved.e = sample(64, [](double t) { return 1.0 + 0.3 * std::cos(kTwoPi * t); }, true);
    starved.c = 0.8;  // g(0.8) = 1.25 < 1.3 at the forcing peak
    CHECK_THROWS_AS(duffing_to_standard(starved), std::invalid_argument);

    DuffingSpec shifted = spec;
    shifted.h = Curve{[](double y) { return y + 0.1; }, nullptr};
    CHECK_THROWS_AS(duffing_to_standard(shifted), std::invalid_argument);

    DuffingSpec sinking = spec;
    sinking.h = Curve{[](double y) { return -y; }, nullptr};  // -h reaches 2 > mean(e)/mean(q)
    CHECK_THROWS_AS(duffing_to_standard(sinking), std::invalid_argument);

    DuffingSpec negative = spec;
    negative.variant = DuffingVariant::example2;
    negative.h = Curve{[](double y) { return -y; }, nullptr};  // must be nonnegative here
    CHECK_THROWS_AS(duffing_to_standard(negative), std::invalid_argument);

    DuffingSpec twosided = spec;
    twosided.h = Curve{[](double y) { return std::fabs(y) * y * y; }, nullptr};
    CHECK_THROWS_AS(build_duffing(twosided), std::invalid_argument);
}

TEST_CASE("growth variant probe matches the nonlinearity's one-sided growth") {
    DuffingSpec spec;
    spec.p = const_grid(64, 1.0);
    spec.q = const_grid(64, 1.0);
    spec.e = const_grid(64, 1.0);
    spec.g = preset_g_inverse_power(1.0);
    spec.c = 0.7;
    spec.variant = DuffingVariant::example3;

    spec.h = preset_h_odd_poly(0.125, 0.5, 1);
    CHECK(build_duffing(spec).growth_variant == 1);

    spec.h = Curve{[](double y) { return 0.5 * y - 0.125 * y * y * y; }, nullptr};
    CHECK(build_duffing(spec).growth_variant == 2);

    DuffingSpec branchy = spec;
    branchy.variant = DuffingVariant::example2;
    branchy.e = lazer_forcing(64);
    branchy.c = 0.6;
    branchy.p = const_grid(64, 1.0);
    branchy.h = preset_h_two_branch(1.5, 1.0);
    CHECK(build_duffing(branchy).growth_variant == 1);
}

TEST_CASE("nonlinearity presets") {
    const Curve tb = preset_h_two_branch(1.5, 1.0);
    CHECK(tb.f(-1.0) == doctest::Approx(1.0));
    CHECK(tb.f(4.0) == doctest::Approx(4.0));
    CHECK(tb.f(0.0) == 0.0);
    CHECK(tb.df(0.0) == 1.0);   // right-hand slope when the right branch is linear
    CHECK(tb.df(-1.0) == doctest::Approx(-1.5));
    CHECK_THROWS_AS(preset_h_two_branch(0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(preset_h_two_branch(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(preset_h_two_branch(1.5, 0.5), std::invalid_argument);

    const Curve op = preset_h_odd_poly(0.125, 0.5, 1);
    CHECK(op.f(2.0) == doctest::Approx(0.0));
    CHECK(op.f(-2.0) == doctest::Approx(0.0));
    CHECK(op.df(0.0) == doctest::Approx(-0.5));
    CHECK_THROWS_AS(preset_h_odd_poly(0.0, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(preset_h_odd_poly(0.125, 0.5, 0), std::invalid_argument);

    const Curve ip = preset_g_inverse_power(1.0);
    CHECK(ip.f(2.0) == doctest::Approx(0.5));
    CHECK(ip.df(2.0) == doctest::Approx(-0.25));
    CHECK_THROWS_AS(preset_g_inverse_power(0.0), std::invalid_argument);
}

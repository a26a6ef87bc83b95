#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "pbvp/conditions.hpp"
#include "pbvp/problems.hpp"

using namespace pbvp;

namespace {
constexpr double kTwoPi = 6.28318530717958647692528676656;

BuiltProblem constant_pendulum() {
    PendulumSpec spec;
    spec.mu = sample(256, [](double) { return 2.0; }, true);
    spec.e = sample(256, [](double) { return 1.0; }, true);
    spec.ell = [](double, double) { return 2.0; };
    spec.r = 1.0;
    return build_pendulum(spec);
}

BuiltProblem lazer_instance() {
    SingularSpec spec;
    spec.p = sample(256, [](double) { return 1.0; }, true);
    spec.e = sample(256, [](double t) { return 1.0 + 0.5 * std::sin(kTwoPi * t); }, true);
    spec.lambda = 1.0;
    spec.C = 1.6;
    return build_singular(spec);
}

Bracket unit_bracket(int n) {
    return bracket_from_closures(
        n, [](double) { return -1.0; }, [](double) { return 0.0; }, [](double) { return 0.0; },
        [](double) { return 1.0; }, [](double) { return 0.0; }, [](double) { return 0.0; });
}
}  // namespace

TEST_CASE("lower and upper defects of the constant pendulum levels") {
    const BuiltProblem built = constant_pendulum();
    const ConditionRecord lo = check_lower(built.prob, built.bracket.alpha);
    const ConditionRecord hi = check_upper(built.prob, built.bracket.beta);
    CHECK(lo.pass);
    CHECK(hi.pass);
    // f(t, pi/2, 0) = 2 - 1 = 1 and -f(t, 3pi/2, 0) = 3, exactly
    CHECK(lo.margin == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(hi.margin == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("defect comparison margin is exact for constant data") {
    const BuiltProblem built = constant_pendulum();
    const Bracket& br = built.bracket;
    const double gap = br.beta.values[0] - br.alpha.values[0];  // pi

    const ConditionRecord ok = verify_E0(built.prob, br, make_params(built.shift_a, built.shift_b), 0.0);
    CHECK(ok.pass);
    CHECK(std::fabs(ok.margin - (built.shift_a * gap - 4.0)) < 1e-10);

    const ConditionRecord bad = verify_E0(built.prob, br, make_params(0.5, 0.0), 0.0);
    CHECK_FALSE(bad.pass);
    CHECK(std::fabs(bad.margin - (0.5 * gap - 4.0)) < 1e-12);
}

TEST_CASE("band invariance holds at the prescribed shift and breaks at a tenth") {
    const BuiltProblem built = constant_pendulum();
    const Bracket& br = built.bracket;

    const LinearParams p = make_params(built.shift_a, built.shift_b);
    const Envelope env = build_envelope(br, p, 0.0, 0.0);
    const ConditionRecord ok = verify_E1(built.prob, br, p, 0.0, sample_envelope(env, 60, 7u));
    CHECK(ok.pass);
    CHECK(ok.method == "sampled");

    const LinearParams p_bad = make_params(built.shift_a / 10.0, built.shift_b);
    const Envelope env_bad = build_envelope(br, p_bad, 0.0, 0.0);
    const ConditionRecord bad =
        verify_E1(built.prob, br, p_bad, 0.0, sample_envelope(env_bad, 120, 7u));
    CHECK_FALSE(bad.pass);
    CHECK(bad.margin < 0.0);
}

TEST_CASE("one-sided invariance variant on the attractive singular instance") {
    const BuiltProblem built = lazer_instance();
    const LinearParams p = make_params(built.shift_a, built.shift_b);
    const Envelope env = build_envelope(built.bracket, p, built.Delta, built.delta);
    const auto members = sample_envelope(env, 60, 5u);
    CHECK(verify_E1prime(built.prob, built.bracket, p, built.Delta, members).pass);
    CHECK(verify_E1(built.prob, built.bracket, p, built.Delta, members).pass);
}

TEST_CASE("tube Lipschitz estimate: difference fallback matches analytic partials") {
    ProblemDef smooth;
    smooth.f = [](double t, double x, double y) { return std::sin(x) * std::cos(3 * y) + t; };
    smooth.fx = [](double, double x, double y) { return std::cos(x) * std::cos(3 * y); };
    smooth.fy = [](double, double x, double y) { return -3.0 * std::sin(x) * std::sin(3 * y); };
    ProblemDef fd = smooth;
    fd.fx = nullptr;
    fd.fy = nullptr;

    const Bracket br = unit_bracket(64);
    const E2Result exact = estimate_E2(smooth, br, 0.4);
    const E2Result approx = estimate_E2(fd, br, 0.4);
    CHECK(exact.record.pass);
    CHECK(std::fabs(exact.ell - approx.ell) < 1e-5 * (1.0 + exact.ell));
    CHECK_FALSE(exact.nonsmooth);
    CHECK(default_mu(br) > 0.0);

    ProblemDef kinked;
    kinked.f = [](double, double, double y) { return std::fabs(y - 0.1); };
    const E2Result rough = estimate_E2(kinked, br, 0.4);
    CHECK(rough.ell > 0.8);
    CHECK(rough.ell < 1.2);

    ProblemDef blows;
    blows.f = [](double, double x, double) { return 1.0 / x; };
    // mu = 1 stretches the alpha tube to touch the pole at x = 0.
    CHECK_THROWS(estimate_E2(blows, br, 1.0));
}

TEST_CASE("growth bound check is its own mirror image under time reversal") {
    const ProblemDef prob = [] {
        ProblemDef p;
        p.f1 = [](double t, double, double y) {
            return -(0.125 * y * y * y - 0.5 * y) * (1.0 + 0.25 * std::sin(kTwoPi * t));
        };
        p.f2 = [](double, double x, double) { return 1.5 - x; };
        p.f = [f1 = p.f1, f2 = p.f2](double t, double x, double y) {
            return f1(t, x, y) + f2(t, x, y);
        };
        return p;
    }();
    const Bracket br = bracket_from_closures(
        64, [](double t) { return 0.5 + 0.1 * std::sin(kTwoPi * t); },
        [](double t) { return 0.1 * kTwoPi * std::cos(kTwoPi * t); },
        [](double t) { return -0.1 * kTwoPi * kTwoPi * std::sin(kTwoPi * t); },
        [](double t) { return 2.0 + 0.2 * std::cos(kTwoPi * t); },
        [](double t) { return -0.2 * kTwoPi * std::sin(kTwoPi * t); },
        [](double t) { return -0.2 * kTwoPi * kTwoPi * std::cos(kTwoPi * t); });
    const GridFunction c = sample(64, [](double) { return 0.1; }, true);

    const ProblemDef rprob = reflect_problem(prob);
    const Bracket rbr = reflect_bracket(br);
    const GridFunction rc = reflect_grid(c);

    // generous constants: both sides pass; starved constants: both fail.
    const GrowthLK lk = growth_LK(prob, br, c);
    for (auto [L, K] : {std::pair{lk.L, lk.K}, {0.0, 0.01}}) {
        const double zmax = default_zmax(br, L, 0.2);
        const ConditionRecord fwd = verify_E3prime(prob, br, c, L, K, zmax, 32, 16, 32);
        const ConditionRecord rev = verify_E3(rprob, rbr, rc, L, K, zmax, 32, 16, 32);
        CHECK(fwd.pass == rev.pass);
        CHECK(std::fabs(fwd.margin - rev.margin) <= 1e-12 * std::max(1.0, std::fabs(fwd.margin)));
    }
}

TEST_CASE("double reflection is the identity") {
    const GridFunction g = sample(64, [](double t) { return std::exp(std::sin(kTwoPi * t)); }, true);
    const GridFunction gg = reflect_grid(reflect_grid(g));
    for (int i = 0; i <= g.n; ++i) CHECK(gg.values[i] == g.values[i]);

    ProblemDef prob;
    prob.f = [](double t, double x, double y) { return t + 2 * x + 3 * y; };
    const ProblemDef r = reflect_problem(prob);
    CHECK(r.eval(0.25, 1.0, 2.0) == prob.eval(0.75, 1.0, -2.0));
}

TEST_CASE("split growth probes pick the correct one-sided variant") {
    const Bracket br = unit_bracket(64);
    const GridFunction c0 = sample(64, [](double) { return 0.0; }, true);

    ProblemDef damped;  // f1 = -log(1 + y^2): decays right, subquadratic left
    damped.f1 = [](double, double, double y) { return -std::log1p(y * y); };
    damped.f2 = [](double, double x, double) { return -x; };
    damped.f = [](double, double x, double y) { return -std::log1p(y * y) - x; };
    const ConditionRecord v1 = check_growth_condition(damped, br, c0, 1);
    CHECK(v1.pass);
    CHECK(v1.method == "sampled asymptotic");

    ProblemDef pumped;  // f1 = +(mu y^3 - nu y): cubic growth on the right
    pumped.f1 = [](double, double, double y) { return 0.125 * y * y * y - 0.5 * y; };
    pumped.f2 = [](double, double x, double) { return -x; };
    pumped.f = [](double, double x, double y) { return 0.125 * y * y * y - 0.5 * y - x; };
    CHECK_FALSE(check_growth_condition(pumped, br, c0, 1).pass);
    CHECK(check_growth_condition(pumped, br, c0, 2).pass);
}

TEST_CASE("quantitative growth constants cover the checked slope range") {
    const BuiltProblem ex2 = [] {
        DuffingSpec spec;
        spec.p = sample(256, [](double) { return 1.0; }, true);
        spec.q = sample(256, [](double) { return 1.0; }, true);
        spec.e = sample(256, [](double t) { return 1.0 + 0.5 * std::sin(kTwoPi * t); }, true);
        spec.g = preset_g_inverse_power(1.0);
        spec.h = Curve{[](double y) { return std::log1p(y * y); },
                       [](double y) { return 2 * y / (1 + y * y); }};
        spec.c = 0.6;
        spec.variant = DuffingVariant::example2;
        return build_duffing(spec);
    }();
    const GridFunction c = sample(256, [g = ex2.growth_c](double) { return g; }, true);
    const GrowthLK lk = growth_LK(ex2.prob, ex2.bracket, c);

    double ms = 0;
    for (int i = 0; i <= 256; ++i)
        ms = std::max(ms, std::fabs(ex2.bracket.alpha.derivative[i]) +
                              std::fabs(ex2.bracket.beta.derivative[i]));
    CHECK(lk.L == doctest::Approx(2 * ms).epsilon(1e-14));
    CHECK(lk.y0 > ms);
    // the far edge of the slope grid contributes |f1| = log(1 + y0^2)
    CHECK(lk.K >= 2 * std::log1p(lk.y0 * lk.y0) - 1e-9);

    const double zmax = default_zmax(ex2.bracket, lk.L, 0.0);
    CHECK(verify_E3(ex2.prob, ex2.bracket, c, lk.L, lk.K, zmax).pass);
    CHECK(compute_Khat(ex2.prob, ex2.bracket, lk.K) >= lk.K);
}

TEST_CASE("certificate aggregation") {
    Certificate cert;
    cert.records.push_back({"one", true, 0.5, {}, "grid", ""});
    cert.records.push_back({"two", true, 1.5, {}, "grid", ""});
    CHECK(cert.all_pass());
    REQUIRE(cert.find("two") != nullptr);
    CHECK(cert.find("two")->margin == 1.5);
    CHECK(cert.find("missing") == nullptr);
    cert.records.push_back({"three", false, -0.1, {}, "grid", ""});
    CHECK_FALSE(cert.all_pass());
}

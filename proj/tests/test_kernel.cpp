#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "pbvp/kernel.hpp"

using namespace pbvp;

namespace {
// Reference values computed with 30-digit arithmetic from the closed forms.
constexpr double kK0_a1b0 = 0.4621171572600097585023185;       // tanh(1/2)
constexpr double kH_half_a2b1 = 0.4616588132623775441043409;   // h(0.5), a=2 b=1
constexpr double kH_zero_a2b1 = 0.5794981165396640254010275;   // h(0),   a=2 b=1
constexpr double kK0_a2b1 = 0.9957228673244656685870548;

bool rel_close(double x, double y, double tol) {
    return std::fabs(x - y) <= tol * std::max({1.0, std::fabs(x), std::fabs(y)});
}
}  // namespace

TEST_CASE("make_params roots and guards") {
    CHECK_THROWS_AS(make_params(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(make_params(-2.0, 0.0), std::domain_error);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ua(0.05, 80.0), ub(-6.0, 6.0);
    for (int k = 0; k < 50; ++k) {
        const double a = ua(rng), b = ub(rng);
        const LinearParams p = make_params(a, b);
        CHECK(p.lambda1 > 0.0);
        CHECK(p.lambda2 < 0.0);
        // z^2 + b z - a at each root
        CHECK(rel_close(p.lambda1 * p.lambda1 + b * p.lambda1, a, 1e-13));
        CHECK(rel_close(p.lambda2 * p.lambda2 + b * p.lambda2, a, 1e-13));
        CHECK(rel_close(p.lambda1 * p.lambda2, -a, 1e-14));
        CHECK(p.k0 > 0.0);
        CHECK(p.k0 <= -p.lambda2 + 1e-14 * std::fabs(p.lambda2));
    }
}

TEST_CASE("kernel matches frozen reference values") {
    const LinearParams p10 = make_params(1.0, 0.0);
    CHECK(rel_close(p10.k0, kK0_a1b0, 1e-15));

    const LinearParams p21 = make_params(2.0, 1.0);
    CHECK(rel_close(h_eval(p21, 0.5), kH_half_a2b1, 1e-14));
    CHECK(rel_close(h_eval(p21, 0.0), kH_zero_a2b1, 1e-14));
    CHECK(rel_close(p21.k0, kK0_a2b1, 1e-14));
}

TEST_CASE("kernel identities hold across the parameter range") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> ua(-2.0, 4.0), ub(-6.0, 6.0), ut(0.0, 1.0);
    for (int k = 0; k < 60; ++k) {
        const double a = std::pow(10.0, ua(rng));  // 1e-2 .. 1e4
        const double b = ub(rng);
        const LinearParams p = make_params(a, b);
        const double h0 = h_eval(p, 0.0);

        CHECK(h0 > 0.0);
        CHECK(rel_close(h_eval(p, 1.0), h0, 1e-12));
        CHECK(h_prime_eval(p, 0.0) < 0.0);
        // unit jump of the slope across the seam
        const double jump = h_prime_eval(p, 1.0) - h_prime_eval(p, 0.0);
        CHECK(std::fabs(jump - 1.0) < 1e-12);
        // k0 definition
        CHECK(rel_close(p.k0, -h_prime_eval(p, 0.0) / h0, 1e-12));

        for (int j = 0; j < 6; ++j) {
            const double t = ut(rng);
            const double h = h_eval(p, t);
            CHECK(h > 0.0);
            //  h'' = a h - b h', each side from its own evaluator
            const double lhs = h_second_eval(p, t);
            const double rhs = a * h - b * h_prime_eval(p, t);
            CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max(1.0, std::fabs(rhs)));
            // slope bound that makes the decay-cone argument work
            CHECK(h_prime_eval(p, t) + p.k0 * h >= -1e-12 * std::max(1.0, std::fabs(h)));
        }
    }
}

TEST_CASE("h1 is the increasing logarithmic slope") {
    const LinearParams p = make_params(5.0, -1.5);
    CHECK(rel_close(h1_eval(p, 0.0), -p.k0, 1e-13));
    double prev = h1_eval(p, 0.0);
    for (int i = 1; i <= 40; ++i) {
        const double cur = h1_eval(p, i / 40.0);
        CHECK(cur > prev);
        CHECK(rel_close(cur, h_prime_eval(p, i / 40.0) / h_eval(p, i / 40.0), 1e-11));
        prev = cur;
    }
}

TEST_CASE("fundamental matrix: identity at 0, frozen value at 1") {
    const LinearParams p = make_params(2.0, 1.0);
    const Matrix2 A0 = fundamental_matrix(p, 0.0);
    CHECK(A0.m00 == 1.0);
    CHECK(A0.m01 == 0.0);
    CHECK(A0.m10 == 0.0);
    CHECK(A0.m11 == 1.0);

    const Matrix2 A1 = fundamental_matrix(p, 1.0);
    CHECK(rel_close(A1.m00, 1.0, 1e-13));
    CHECK(rel_close(A1.m01, 0.860982181740810847822096, 1e-13));
    CHECK(rel_close(A1.m10, 1.725631147813324294592989, 1e-13));
    CHECK(rel_close(A1.m11, 1.853617111695657927254287, 1e-13));
}

TEST_CASE("fundamental matrix satisfies the semigroup property") {
    for (auto [a, b] : {std::pair{2.0, 1.0}, {1.0, 0.0}, {10.0, -3.0}, {0.3, 2.0}}) {
        const LinearParams p = make_params(a, b);
        const Matrix2 lhs = fundamental_matrix(p, 0.7);
        const Matrix2 rhs = fundamental_matrix(p, 0.4) * fundamental_matrix(p, 0.3);
        const double scale = std::max({std::fabs(lhs.m00), std::fabs(lhs.m01),
                                       std::fabs(lhs.m10), std::fabs(lhs.m11), 1.0});
        CHECK(std::fabs(lhs.m00 - rhs.m00) < 1e-12 * scale);
        CHECK(std::fabs(lhs.m01 - rhs.m01) < 1e-12 * scale);
        CHECK(std::fabs(lhs.m10 - rhs.m10) < 1e-12 * scale);
        CHECK(std::fabs(lhs.m11 - rhs.m11) < 1e-12 * scale);
    }
}

TEST_CASE("periodicity resolvent inverts I - A(1), with exact zero corner") {
    const LinearParams p10 = make_params(1.0, 0.0);
    const Matrix2 R10 = periodicity_resolvent(p10);
    CHECK(rel_close(R10.m00, 1.0, 1e-13));
    CHECK(rel_close(R10.m01, -1.081976706869326424385002, 1e-13));
    CHECK(rel_close(R10.m10, -0.8509181282393215451338428, 1e-13));
    CHECK(R10.m11 == 0.0);

    for (auto [a, b] : {std::pair{2.0, 1.0}, {1.0, 0.0}, {10.0, -3.0}, {0.3, 2.0}, {25.0, 0.0}}) {
        const LinearParams p = make_params(a, b);
        const Matrix2 A1 = fundamental_matrix(p, 1.0);
        const Matrix2 R = periodicity_resolvent(p);
        CHECK(R.m11 == 0.0);
        const Matrix2 ImA{1.0 - A1.m00, -A1.m01, -A1.m10, 1.0 - A1.m11};
        const Matrix2 P = R * ImA;
        CHECK(std::fabs(P.m00 - 1.0) < 1e-10);
        CHECK(std::fabs(P.m01) < 1e-10);
        CHECK(std::fabs(P.m10) < 1e-10);
        CHECK(std::fabs(P.m11 - 1.0) < 1e-10);
    }
}

TEST_CASE("theta1_from_u is nonnegative for nonpositive input") {
    const LinearParams p = make_params(3.0, -0.5);
    const int n = 64;
    const GridFunction u = sample(n, [](double t) { return -1.0 - std::sin(6.28318530717958647692 * t); }, true);
    const GridFunction th1 = theta1_from_u(p, u);
    REQUIRE(th1.values.size() == static_cast<size_t>(n + 1));
    for (double v : th1.values) CHECK(v >= 0.0);
    // u identically zero maps to zero
    const GridFunction z = sample(n, [](double) { return 0.0; }, true);
    for (double v : theta1_from_u(p, z).values) CHECK(v == 0.0);
}

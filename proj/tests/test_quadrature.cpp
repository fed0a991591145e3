#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "dquad/quadrature.hpp"
#include "support/gauss_oracle.hpp"

using namespace dquad;
using quad::gauss_legendre_rule;
using quad::integrate_1d;
using quad::integrate_diamond_direct;
using quad::integrate_diamond_rotated;
using quad::integrate_rectangle;
using quad::integrate_triangle;
using quad::IntegralResult;
using quad::NonConvergence;
using quad::QuadratureOptions;
using quad::Rule1D;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("rule order 1 and the two small classical rules") {
    Rule1D r1 = gauss_legendre_rule(1);
    CHECK(r1.nodes == std::vector<double>{0.0});
    CHECK(r1.weights == std::vector<double>{2.0});

    Rule1D r2 = gauss_legendre_rule(2);
    CHECK(r2.nodes[1] == doctest::Approx(0.5773502691896257).epsilon(1e-15));
    CHECK(r2.nodes[0] == -r2.nodes[1]);
    CHECK(r2.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r2.weights[1] == r2.weights[0]);

    Rule1D r3 = gauss_legendre_rule(3);
    CHECK(r3.nodes[1] == 0.0);
    CHECK(r3.nodes[2] == doctest::Approx(0.7745966692414834).epsilon(1e-15));
    CHECK(r3.weights[1] == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
    CHECK(r3.weights[2] == doctest::Approx(5.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("rules are symmetric, positive, normalized, ascending") {
    for (int n : {2, 3, 4, 5, 8, 13, 16, 32, 64, 127, 128}) {
        CAPTURE(n);
        Rule1D r = gauss_legendre_rule(n);
        REQUIRE(static_cast<int>(r.nodes.size()) == n);
        double weight_sum = 0.0;
        for (int i = 0; i < n; ++i) {
            CHECK(r.weights[i] > 0.0);
            CHECK(r.nodes[i] > -1.0);
            CHECK(r.nodes[i] < 1.0);
            if (i > 0) CHECK(r.nodes[i] > r.nodes[i - 1]);
            // Mirrored construction makes the symmetry exact, not approximate.
            CHECK(r.nodes[i] == -r.nodes[n - 1 - i]);
            CHECK(r.weights[i] == r.weights[n - 1 - i]);
            weight_sum += r.weights[i];
        }
        CHECK(weight_sum == doctest::Approx(2.0).epsilon(1e-14));
    }
}

TEST_CASE("rule of order n integrates monomials up to degree 2n-1") {
    for (int n : {2, 4, 8, 16, 32}) {
        CAPTURE(n);
        Rule1D r = gauss_legendre_rule(n);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double sum = 0.0;
            for (int i = 0; i < n; ++i) {
                sum += r.weights[i] * std::pow(r.nodes[i], k);
            }
            double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
            CAPTURE(k);
            CHECK(std::fabs(sum - exact) <= 1e-14);
        }
    }
}

TEST_CASE("rule order is validated") {
    CHECK_THROWS_AS(gauss_legendre_rule(0), ArgumentError);
    CHECK_THROWS_AS(gauss_legendre_rule(-3), ArgumentError);
    CHECK_THROWS_AS(gauss_legendre_rule(129), ArgumentError);
}

TEST_CASE("integrate_1d on smooth and polynomial integrands") {
    auto cubic = integrate_1d([](double x) { return x * x * x; }, 0.0, 1.0);
    CHECK(cubic.value == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(cubic.method == "gauss_1d");

    auto sine = integrate_1d([](double x) { return std::sin(x); }, 0.0, kPi);
    CHECK(std::fabs(sine.value - 2.0) <= 1e-13);
    CHECK(std::fabs(sine.value - 2.0) <=
          std::max(sine.error_estimate, 1e-13));

    // Runge's function stresses the subdivision.
    auto runge = integrate_1d(
        [](double x) { return 1.0 / (1.0 + 25.0 * x * x); }, -1.0, 1.0);
    CHECK(std::fabs(runge.value - 0.4 * std::atan(5.0)) <= 1e-10);
}

TEST_CASE("integrate_1d handles a kink by subdividing") {
    QuadratureOptions opts;
    auto res = integrate_1d(
        [](double x) { return std::fabs(x - 1.0 / 3.0); }, 0.0, 1.0, opts);
    CHECK(std::fabs(res.value - 5.0 / 18.0) <= 1e-10);
    CHECK(res.evaluations > 3 * opts.base_order);
}

TEST_CASE("integrate_1d evaluation counts") {
    QuadratureOptions fixed;
    fixed.adaptive = false;
    fixed.base_order = 32;
    auto r = integrate_1d([](double x) { return std::exp(x); }, 0.0, 1.0,
                          fixed);
    CHECK(r.evaluations == 96);  // n + 2n
    CHECK(std::fabs(r.value - (std::exp(1.0) - 1.0)) <= 1e-13);

    fixed.base_order = 8;
    auto r8 = integrate_1d([](double x) { return std::exp(x); }, 0.0, 1.0,
                           fixed);
    CHECK(r8.evaluations == 24);

    // A single accepted panel in adaptive mode costs the same 3n.
    auto smooth = integrate_1d([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(smooth.evaluations == 96);
}

TEST_CASE("integrate_1d is deterministic") {
    auto f = [](double x) { return std::exp(-x * x) * std::sin(7.0 * x); };
    auto a = integrate_1d(f, -2.0, 3.0);
    auto b = integrate_1d(f, -2.0, 3.0);
    CHECK(a.value == b.value);
    CHECK(a.error_estimate == b.error_estimate);
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("integrate_1d argument validation") {
    auto f = [](double x) { return x; };
    CHECK_THROWS_AS(integrate_1d(f, 1.0, 1.0), quad::DegenerateDomain);
    CHECK_THROWS_AS(integrate_1d(f, 2.0, 1.0), quad::DegenerateDomain);
    CHECK_THROWS_AS(
        integrate_1d(f, std::numeric_limits<double>::quiet_NaN(), 1.0),
        ArgumentError);

    QuadratureOptions bad;
    bad.base_order = 0;
    CHECK_THROWS_AS(integrate_1d(f, 0.0, 1.0, bad), ArgumentError);
    bad.base_order = 65;  // embedded pair would need order 130
    CHECK_THROWS_AS(integrate_1d(f, 0.0, 1.0, bad), ArgumentError);
    QuadratureOptions neg;
    neg.abs_tol = -1.0;
    CHECK_THROWS_AS(integrate_1d(f, 0.0, 1.0, neg), ArgumentError);
}

TEST_CASE("unattainable tolerance raises NonConvergence with a usable partial") {
    QuadratureOptions zero;
    zero.abs_tol = 0.0;
    zero.rel_tol = 0.0;
    bool thrown = false;
    try {
        integrate_1d([](double x) { return std::exp(x); }, 0.0, 1.0, zero);
    } catch (const NonConvergence& e) {
        thrown = true;
        CHECK(std::fabs(e.partial.value - (std::exp(1.0) - 1.0)) <= 1e-12);
        CHECK(e.partial.evaluations > 0);
        CHECK(e.partial.method == "gauss_1d");
    }
    CHECK(thrown);
}

TEST_CASE("integrate_rectangle: separable polynomial and oracle comparison") {
    auto poly = integrate_rectangle(
        [](double x, double y) { return x * x * y * y * y; },
        Rectangle{0.0, 1.0, 0.0, 2.0});
    CHECK(poly.value == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(poly.method == "rect_tensor");

    auto f = [](double x, double y) { return std::exp(x + y * y); };
    auto mine = integrate_rectangle(f, Rectangle{-1.0, 1.0, -1.0, 1.0});
    double ref = test_oracle::integrate_2d(f, -1.0, 1.0, -1.0, 1.0);
    CHECK(std::fabs(mine.value - ref) <= 1e-12 * std::fabs(ref));
}

TEST_CASE("integrate_rectangle refines a localized bump") {
    auto bump = [](double x, double y) {
        double dx = x - 0.3;
        double dy = y + 0.2;
        return std::exp(-50.0 * (dx * dx + dy * dy));
    };
    auto mine = integrate_rectangle(bump, Rectangle{-1.0, 1.0, -1.0, 1.0});
    double ref = test_oracle::integrate_2d(bump, -1.0, 1.0, -1.0, 1.0);
    CHECK(std::fabs(mine.value - ref) <= 1e-11);
}

TEST_CASE("integrate_rectangle evaluation counts and determinism") {
    QuadratureOptions fixed;
    fixed.adaptive = false;
    auto r = integrate_rectangle(
        [](double x, double y) { return std::cos(x) * std::cos(y); },
        Rectangle{0.0, 1.0, 0.0, 1.0}, fixed);
    CHECK(r.evaluations == 5 * 32 * 32);

    auto f = [](double x, double y) { return std::sin(3.0 * x - y); };
    auto a = integrate_rectangle(f, Rectangle{0.0, 2.0, -1.0, 1.0});
    auto b = integrate_rectangle(f, Rectangle{0.0, 2.0, -1.0, 1.0});
    CHECK(a.value == b.value);
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("integrate_rectangle rejects empty rectangles") {
    auto f = [](double, double) { return 1.0; };
    CHECK_THROWS_AS(integrate_rectangle(f, Rectangle{0.0, 0.0, 0.0, 1.0}),
                    quad::DegenerateDomain);
    CHECK_THROWS_AS(integrate_rectangle(f, Rectangle{0.0, 1.0, 2.0, 1.0}),
                    quad::DegenerateDomain);
}

TEST_CASE("integrate_triangle: areas and polynomials") {
    Triangle unit{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    auto area = integrate_triangle([](double, double) { return 1.0; }, unit);
    CHECK(area.value == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(area.method == "triangle_duffy");

    auto mx = integrate_triangle([](double x, double) { return x; }, unit);
    CHECK(mx.value == doctest::Approx(1.0 / 6.0).epsilon(1e-13));

    auto mxx = integrate_triangle([](double x, double) { return x * x; },
                                  unit);
    CHECK(mxx.value == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
}

TEST_CASE("integrate_triangle: exact closed form for exp(x+y)") {
    // integral over the unit triangle of exp(x+y) is exactly 1.
    Triangle unit{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    auto r = integrate_triangle(
        [](double x, double y) { return std::exp(x + y); }, unit);
    CHECK(std::fabs(r.value - 1.0) <= 1e-12);
}

TEST_CASE("integrate_triangle is orientation and labeling insensitive") {
    auto f = [](double x, double y) { return std::cos(x - 2.0 * y); };
    Triangle t1{{-1.0, 0.5}, {2.0, 0.0}, {0.5, 3.0}};
    Triangle t2{{2.0, 0.0}, {0.5, 3.0}, {-1.0, 0.5}};  // rotated labels
    Triangle t3{{-1.0, 0.5}, {0.5, 3.0}, {2.0, 0.0}};  // opposite orientation
    auto r1 = integrate_triangle(f, t1);
    auto r2 = integrate_triangle(f, t2);
    auto r3 = integrate_triangle(f, t3);
    CHECK(r1.value == doctest::Approx(r2.value).epsilon(1e-12));
    CHECK(r1.value == doctest::Approx(r3.value).epsilon(1e-12));
}

TEST_CASE("integrate_triangle is additive under midpoint refinement") {
    auto f = [](double x, double y) {
        return 1.0 / (0.05 + x * x + y * y);
    };
    Triangle whole{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    Point mab{0.5, 0.0};
    Point mbc{0.5, 0.5};
    Point mca{0.0, 0.5};
    Triangle parts[4] = {
        {{0.0, 0.0}, mab, mca},
        {mab, {1.0, 0.0}, mbc},
        {mca, mbc, {0.0, 1.0}},
        {mab, mbc, mca},
    };
    double sum = 0.0;
    for (const Triangle& t : parts) sum += integrate_triangle(f, t).value;
    auto r = integrate_triangle(f, whole);
    CHECK(r.value == doctest::Approx(sum).epsilon(1e-10));
}

TEST_CASE("integrate_triangle rejects degenerate triangles") {
    auto f = [](double, double) { return 1.0; };
    Triangle flat{{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}};
    CHECK_THROWS_AS(integrate_triangle(f, flat), quad::DegenerateDomain);
    Triangle nan_vertex{{0.0, 0.0},
                        {std::numeric_limits<double>::quiet_NaN(), 0.0},
                        {0.0, 1.0}};
    CHECK_THROWS_AS(integrate_triangle(f, nan_vertex), ArgumentError);
}

TEST_CASE("diamond integrators agree with geometry and each other") {
    auto one = [](double, double) { return 1.0; };
    auto direct = integrate_diamond_direct(one, 1.0);
    auto rotated = integrate_diamond_rotated(one, 1.0);
    CHECK(direct.value == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(rotated.value == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(direct.method == "diamond_direct");
    CHECK(rotated.method == "diamond_rotated");

    // integral of x^2 + y^2 over {|x|+|y| <= L} is 2 L^4 / 3.
    auto quadratic = [](double x, double y) { return x * x + y * y; };
    CHECK(integrate_diamond_direct(quadratic, 1.0).value ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(integrate_diamond_rotated(quadratic, 1.0).value ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(integrate_diamond_direct(quadratic, 2.5).value ==
          doctest::Approx(2.0 * std::pow(2.5, 4) / 3.0).epsilon(1e-12));
}

TEST_CASE("diamond integrators match an independent reference") {
    auto f = [](double x, double y) { return std::exp(x) * std::cos(y); };
    const double h = 1.3;
    // Reference through the rotation, evaluated with the oracle rule.
    double ref = 0.5 * test_oracle::integrate_2d(
                           [&](double u, double v) {
                               return f(0.5 * (u + v), 0.5 * (u - v));
                           },
                           -h, h, -h, h);
    auto direct = integrate_diamond_direct(f, h);
    auto rotated = integrate_diamond_rotated(f, h);
    CHECK(std::fabs(direct.value - ref) <= 1e-11);
    CHECK(std::fabs(rotated.value - ref) <= 1e-11);
    CHECK(std::fabs(direct.value - rotated.value) <=
          10.0 * (direct.error_estimate + rotated.error_estimate) + 1e-13);
}

TEST_CASE("diamond evaluation counts decompose as documented") {
    QuadratureOptions fixed;
    fixed.adaptive = false;
    auto f = [](double x, double y) { return std::exp(x - y); };
    auto direct = integrate_diamond_direct(f, 1.0, fixed);
    CHECK(direct.evaluations == 4 * 5 * 32 * 32);
    auto rotated = integrate_diamond_rotated(f, 1.0, fixed);
    CHECK(rotated.evaluations == 5 * 32 * 32);
}

TEST_CASE("diamond half-diagonal validation") {
    auto f = [](double, double) { return 1.0; };
    CHECK_THROWS_AS(integrate_diamond_direct(f, 0.0),
                    quad::DegenerateDomain);
    CHECK_THROWS_AS(integrate_diamond_direct(f, -1.0),
                    quad::DegenerateDomain);
    CHECK_THROWS_AS(integrate_diamond_rotated(f, 0.0),
                    quad::DegenerateDomain);
    CHECK_THROWS_AS(
        integrate_diamond_direct(f, std::numeric_limits<double>::infinity()),
        ArgumentError);
}

TEST_CASE("NonConvergence from the diamond aggregates all four quadrants") {
    QuadratureOptions zero;
    zero.abs_tol = 0.0;
    zero.rel_tol = 0.0;
    auto f = [](double x, double y) { return std::exp(x + 0.5 * y); };
    bool thrown = false;
    try {
        integrate_diamond_direct(f, 1.0, zero);
    } catch (const NonConvergence& e) {
        thrown = true;
        auto good = integrate_diamond_direct(f, 1.0);
        CHECK(std::fabs(e.partial.value - good.value) <= 1e-10);
        CHECK(e.partial.method == "diamond_direct");
        // All four quadrant triangles contributed evaluations.
        CHECK(e.partial.evaluations >= 4 * 5 * 32 * 32);
    }
    CHECK(thrown);
}

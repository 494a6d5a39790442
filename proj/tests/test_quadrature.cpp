#include <doctest.h>

#include <cmath>

#include "fvmbem/quadrature.hpp"

using namespace fvmbem;

namespace {

// Exact integral of x^a y^b over the reference triangle {x,y >= 0, x+y <= 1}.
double reference_monomial(int a, int b) {
    auto factorial = [](int n) {
        double f = 1.0;
        for (int k = 2; k <= n; ++k) f *= k;
        return f;
    };
    return factorial(a) * factorial(b) / factorial(a + b + 2);
}

double apply_rule(const TriangleRule& rule, int a, int b) {
    // reference triangle has area 1/2; rule weights are normalized to 1
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.points.size(); ++k) {
        const double x = rule.points[k].l1, y = rule.points[k].l2;
        sum += rule.weights[k] * std::pow(x, a) * std::pow(y, b);
    }
    return 0.5 * sum;
}

} // namespace

TEST_CASE("Gauss-Legendre rules integrate polynomials of degree 2n-1 exactly") {
    for (int n : {1, 2, 3, 4, 8, 16, 24}) {
        const GaussRule& rule = gauss_legendre(n);
        REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
        for (int deg = 0; deg <= 2 * n - 1; ++deg) {
            double sum = 0.0;
            for (int k = 0; k < n; ++k)
                sum += rule.weights[k] * std::pow(rule.nodes[k], deg);
            const double exact = deg % 2 == 0 ? 2.0 / (deg + 1) : 0.0;
            CHECK(sum == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
        }
    }
}

TEST_CASE("triangle rules are exact to their stated degree") {
    for (int degree : {2, 4, 6}) {
        const TriangleRule& rule = triangle_rule(degree);
        for (int a = 0; a <= degree; ++a)
            for (int b = 0; a + b <= degree; ++b)
                CHECK(apply_rule(rule, a, b) ==
                      doctest::Approx(reference_monomial(a, b)).epsilon(1e-13));
    }
}

TEST_CASE("collapsed triangle rule reaches high degrees") {
    const TriangleRule rule = triangle_rule_collapsed(8);
    for (int a = 0; a <= 7; ++a)
        for (int b = 0; a + b <= 7; ++b)
            CHECK(apply_rule(rule, a, b) ==
                  doctest::Approx(reference_monomial(a, b)).epsilon(1e-13));
}

TEST_CASE("segment quadrature integrates along arbitrary segments") {
    const Vec2 a{0.2, -0.1}, b{-0.3, 0.4};
    const double len = dist(a, b);
    CHECK(integrate_segment(a, b, 4, [](const Vec2&) { return 1.0; }) ==
          doctest::Approx(len).epsilon(1e-14));
    const double lin = integrate_segment(a, b, 2, [](const Vec2& p) { return 3.0 * p.x - p.y; });
    const Vec2 mid = (a + b) * 0.5;
    CHECK(lin == doctest::Approx((3.0 * mid.x - mid.y) * len).epsilon(1e-14));
}

#pragma once

#include <vector>

#include "fvmbem/common.hpp"

namespace fvmbem {

/// Nodes and weights on the reference interval [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (exact through degree 2n-1), cached per n.
const GaussRule& gauss_legendre(int n);

/// Quadrature rule on a reference triangle, stored as barycentric
/// coordinates (l1, l2) with l3 = 1 - l1 - l2; weights sum to 1.
struct TriangleRule {
    struct Point {
        double l1, l2;
    };
    std::vector<Point> points;
    std::vector<double> weights;
};

/// Symmetric rule exact through the requested polynomial degree (2, 4 or 6).
const TriangleRule& triangle_rule(int degree);

/// Tensor-product rule on the triangle via the collapsed-square map,
/// exact through degree n-1. Used for quadrature-sensitivity checks.
TriangleRule triangle_rule_collapsed(int n);

/// Integrate f over the segment [a, b] with an n-point Gauss rule.
template <typename F>
double integrate_segment(const Vec2& a, const Vec2& b, int n, F&& f) {
    const GaussRule& rule = gauss_legendre(n);
    const Vec2 mid = (a + b) * 0.5;
    const Vec2 half = (b - a) * 0.5;
    const double jac = 0.5 * dist(a, b);
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
    return jac * sum;
}

/// Integrate f over the triangle (a, b, c) with the given reference rule.
template <typename F>
double integrate_triangle(const Vec2& a, const Vec2& b, const Vec2& c,
                          const TriangleRule& rule, F&& f) {
    const double area = std::abs(signed_area(a, b, c));
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.points.size(); ++k) {
        const auto& p = rule.points[k];
        const double l3 = 1.0 - p.l1 - p.l2;
        const Vec2 x = a * p.l1 + b * p.l2 + c * l3;
        sum += rule.weights[k] * f(x);
    }
    return area * sum;
}

} // namespace fvmbem

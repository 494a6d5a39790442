#include "fvmbem/quadrature.hpp"

#include <map>
#include <mutex>

namespace fvmbem {

namespace {

// Newton iteration on Legendre polynomials; nodes accurate to ~1e-15.
GaussRule compute_gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev initial guess.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

TriangleRule make_rule(std::initializer_list<std::array<double, 3>> groups) {
    // Each group is (l1, l2, weight); permutations of distinct barycentric
    // values are expanded so the rule is fully symmetric.
    TriangleRule rule;
    for (const auto& g : groups) {
        const double a = g[0], b = g[1], c = 1.0 - g[0] - g[1];
        const double w = g[2];
        std::vector<std::array<double, 2>> perms = {
            {a, b}, {b, c}, {c, a}, {b, a}, {c, b}, {a, c}};
        std::vector<std::array<double, 2>> unique;
        for (const auto& p : perms) {
            bool seen = false;
            for (const auto& q : unique)
                if (std::abs(p[0] - q[0]) < 1e-14 && std::abs(p[1] - q[1]) < 1e-14)
                    seen = true;
            if (!seen) unique.push_back(p);
        }
        for (const auto& p : unique) {
            rule.points.push_back({p[0], p[1]});
            rule.weights.push_back(w);
        }
    }
    return rule;
}

} // namespace

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

const TriangleRule& triangle_rule(int degree) {
    // Dunavant symmetric rules; weights sum to 1 on the reference triangle.
    static const TriangleRule deg2 = make_rule({
        {2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0},
    });
    static const TriangleRule deg4 = make_rule({
        {0.108103018168070, 0.445948490915965, 0.223381589678011},
        {0.816847572980459, 0.091576213509771, 0.109951743655322},
    });
    static const TriangleRule deg6 = make_rule({
        {0.873821971016996, 0.063089014491502, 0.050844906370207},
        {0.501426509658179, 0.249286745170910, 0.116786275726379},
        {0.636502499121399, 0.310352451033785, 0.082851075618374},
    });
    if (degree <= 2) return deg2;
    if (degree <= 4) return deg4;
    if (degree <= 6) return deg6;
    throw config_error("triangle_rule: no table for degree > 6, use triangle_rule_collapsed");
}

TriangleRule triangle_rule_collapsed(int n) {
    const GaussRule& g = gauss_legendre(n);
    TriangleRule rule;
    for (int i = 0; i < n; ++i) {
        const double u = 0.5 * (1.0 + g.nodes[i]);
        for (int j = 0; j < n; ++j) {
            const double v = 0.5 * (1.0 + g.nodes[j]);
            // Collapsed map (u, v) -> (u, v (1-u)); Jacobian (1-u), doubled
            // reference measure folded into the weights.
            rule.points.push_back({u, v * (1.0 - u)});
            rule.weights.push_back(0.5 * g.weights[i] * g.weights[j] * (1.0 - u));
        }
    }
    return rule;
}

} // namespace fvmbem

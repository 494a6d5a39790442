#include "fvmbem/bem.hpp"

#include <cmath>

#include "fvmbem/quadrature.hpp"

namespace fvmbem {

namespace {

constexpr double kInv2Pi = 1.0 / (2.0 * M_PI);

// Local coordinates of a point relative to a segment: y(xi) = mid + h*xi*dir
// with h = length/2; p is the tangential, q_signed the normal coordinate of
// x in units of h (sign follows the outward normal).
struct LocalCoords {
    double p;
    double q_signed;
};

LocalCoords local_coords(const Vec2& x, const Vec2& mid, const Vec2& dir,
                         const Vec2& normal, double half_length) {
    const Vec2 d = x - mid;
    return {dot(dir, d) / half_length, dot(normal, d) / half_length};
}

// Integral over [-1,1] of log sqrt((xi-p)^2 + q^2).
double log_primitive(double w, double q) {
    if (q == 0.0) return w == 0.0 ? 0.0 : w * std::log(std::abs(w)) - w;
    return 0.5 * (w * std::log(w * w + q * q) - 2.0 * w) + q * std::atan(w / q);
}

double log_inner_reference(double p, double q) {
    const double qa = std::abs(q);
    return log_primitive(1.0 - p, qa) - log_primitive(-1.0 - p, qa);
}

// Integral over the segment of log|x-y| ds_y, exact.
double log_inner(const Vec2& x, const Vec2& s0, const Vec2& s1) {
    const double len = dist(s0, s1);
    const double h = 0.5 * len;
    const Vec2 mid = (s0 + s1) * 0.5;
    const Vec2 dir = (s1 - s0) / len;
    const Vec2 nrm = rot_cw(dir);
    const LocalCoords lc = local_coords(x, mid, dir, nrm, h);
    return h * (2.0 * std::log(h) + log_inner_reference(lc.p, lc.q_signed));
}

// Integral over [0,beta] of log(w^2 - 2cw + 1).
double log_quadratic_primitive(double beta, double c) {
    const double s2 = 1.0 - c * c;
    if (s2 <= 1e-28) {
        if (c > 0.0)
            throw config_error("log_pair_integral: overlapping collinear segments");
        // opposite directions: (w+1)^2
        return 2.0 * ((1.0 + beta) * std::log1p(beta) - beta);
    }
    const double sigma = std::sqrt(s2);
    return (beta - c) * std::log(beta * beta - 2.0 * c * beta + 1.0) - 2.0 * beta +
           2.0 * sigma * (std::atan((beta - c) / sigma) + std::atan(c / sigma));
}

// Both segments parameterized away from the shared vertex.
double log_pair_adjacent(const Vec2& shared, const Vec2& e1, const Vec2& e2) {
    const double l1 = dist(shared, e1);
    const double l2 = dist(shared, e2);
    const double c = dot(e1 - shared, e2 - shared) / (l1 * l2);
    return l1 * l2 * (0.5 * (std::log(l1) + std::log(l2)) - 0.5) +
           0.25 * l1 * l1 * log_quadratic_primitive(l2 / l1, c) +
           0.25 * l2 * l2 * log_quadratic_primitive(l1 / l2, c);
}

bool same_point(const Vec2& a, const Vec2& b, double scale) {
    return dist(a, b) <= 1e-12 * scale;
}

} // namespace

double log_pair_integral(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
    const double la = dist(a0, a1), lb = dist(b0, b1);
    const double scale = std::max(la, lb);

    const bool fwd = same_point(a0, b0, scale) && same_point(a1, b1, scale);
    const bool rev = same_point(a0, b1, scale) && same_point(a1, b0, scale);
    if (fwd || rev) return la * la * (std::log(la) - 1.5);

    if (same_point(a0, b0, scale)) return log_pair_adjacent(a0, a1, b1);
    if (same_point(a0, b1, scale)) return log_pair_adjacent(a0, a1, b0);
    if (same_point(a1, b0, scale)) return log_pair_adjacent(a1, a0, b1);
    if (same_point(a1, b1, scale)) return log_pair_adjacent(a1, a0, b0);

    // disjoint: exact inner integral, 16-point Gauss outside
    return integrate_segment(a0, a1, 16,
                             [&](const Vec2& x) { return log_inner(x, b0, b1); });
}

double single_layer_entry(const BoundaryGeometry& g, int k, int l) {
    return -kInv2Pi * log_pair_integral(g.start[k], g.end[k], g.start[l], g.end[l]);
}

namespace {

// Moments M_j = integral over [-1,1] of xi^j / ((xi-p)^2 + q^2).
// Upward recursion near the segment, plain Gauss when the pole pair is far
// enough for the quadrature to converge below roundoff.
void reference_moments(double p, double q, int max_degree, double* out) {
    const double qa = std::abs(q);
    const double beyond = std::max(std::abs(p) - 1.0, 0.0);
    if (beyond * beyond + q * q > 1.0) {
        const GaussRule& rule = gauss_legendre(24);
        for (int j = 0; j <= max_degree; ++j) out[j] = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double xi = rule.nodes[i];
            const double w = rule.weights[i] / ((xi - p) * (xi - p) + q * q);
            double pow_xi = 1.0;
            for (int j = 0; j <= max_degree; ++j) {
                out[j] += w * pow_xi;
                pow_xi *= xi;
            }
        }
        return;
    }
    out[0] = (std::atan((1.0 - p) / qa) - std::atan((-1.0 - p) / qa)) / qa;
    if (max_degree >= 1)
        out[1] = 0.5 * std::log(((1.0 - p) * (1.0 - p) + q * q) /
                                ((1.0 + p) * (1.0 + p) + q * q)) +
                 p * out[0];
    const double r2 = p * p + q * q;
    for (int j = 2; j <= max_degree; ++j) {
        const double s = (j % 2 == 0) ? 2.0 / (j - 1) : 0.0;
        out[j] = s + 2.0 * p * out[j - 1] - r2 * out[j - 2];
    }
}

// Integrand vector of the double layer moments at observation point x.
void double_layer_inner(const BoundaryGeometry& g, int l, const Vec2& x,
                        int max_degree, double* out) {
    const double h = 0.5 * g.length[l];
    const LocalCoords lc =
        local_coords(x, g.midpoint(l), g.direction(l), g.normal[l], h);
    if (lc.q_signed == 0.0) {
        for (int j = 0; j <= max_degree; ++j) out[j] = 0.0;
        return;
    }
    reference_moments(lc.p, lc.q_signed, max_degree, out);
    for (int j = 0; j <= max_degree; ++j) out[j] *= kInv2Pi * lc.q_signed;
}

} // namespace

Eigen::VectorXd double_layer_moments(const BoundaryGeometry& g, int k, int l,
                                     int max_degree) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(max_degree + 1);
    std::vector<double> buf(max_degree + 1);

    const double scale = std::max(g.length[k], g.length[l]);
    const bool identical = same_point(g.start[k], g.start[l], scale) &&
                           same_point(g.end[k], g.end[l], scale);
    if (identical) return acc; // collinear kernel vanishes

    // Outer subintervals of the test segment, graded towards a shared vertex
    // so the corner kink cannot degrade the Gauss rule.
    std::vector<std::pair<double, double>> pieces;
    const bool share_start = same_point(g.start[k], g.start[l], scale) ||
                             same_point(g.start[k], g.end[l], scale);
    const bool share_end = same_point(g.end[k], g.start[l], scale) ||
                           same_point(g.end[k], g.end[l], scale);
    if (share_start || share_end) {
        double hi = 1.0;
        for (int piece = 0; piece < 10 && hi > 1e-12; ++piece, hi /= 4.0)
            pieces.push_back({hi / 4.0, hi});
        pieces.push_back({0.0, hi});
        if (share_end)
            for (auto& [p0, p1] : pieces) {
                const double q0 = 1.0 - p1;
                p1 = 1.0 - p0;
                p0 = q0;
            }
    } else {
        pieces = {{0.0, 1.0}};
    }

    const GaussRule& rule = gauss_legendre(16);
    for (const auto& [t0, t1] : pieces) {
        const Vec2 p0 = g.start[k] + (g.end[k] - g.start[k]) * t0;
        const Vec2 p1 = g.start[k] + (g.end[k] - g.start[k]) * t1;
        const double jac = 0.5 * dist(p0, p1);
        const Vec2 mid = (p0 + p1) * 0.5;
        const Vec2 half = (p1 - p0) * 0.5;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const Vec2 x = mid + half * rule.nodes[i];
            double_layer_inner(g, l, x, max_degree, buf.data());
            for (int j = 0; j <= max_degree; ++j)
                acc[j] += jac * rule.weights[i] * buf[j];
        }
    }
    return acc;
}

BoundaryGeometry BoundaryGeometry::from_mesh(const PrimalMesh& mesh) {
    BoundaryGeometry g;
    const int n = mesh.n_boundary_edges();
    g.start.reserve(n);
    for (int k = 0; k < n; ++k) {
        g.start.push_back(mesh.vertices[mesh.boundary_edges[k][0]]);
        g.end.push_back(mesh.vertices[mesh.boundary_edges[k][1]]);
        g.length.push_back(mesh.boundary_length(k));
        g.normal.push_back(mesh.boundary_normal(k));
    }
    return g;
}

BoundaryGeometry BoundaryGeometry::refined() const {
    BoundaryGeometry g;
    for (int k = 0; k < size(); ++k) {
        const Vec2 m = midpoint(k);
        g.start.push_back(start[k]);
        g.end.push_back(m);
        g.start.push_back(m);
        g.end.push_back(end[k]);
        g.length.push_back(0.5 * length[k]);
        g.length.push_back(0.5 * length[k]);
        g.normal.push_back(normal[k]);
        g.normal.push_back(normal[k]);
    }
    return g;
}

Eigen::MatrixXd assemble_single_layer(const BoundaryGeometry& g) {
    const int n = g.size();
    Eigen::MatrixXd V(n, n);
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l <= k; ++l) {
            const double v = single_layer_entry(g, k, l);
            V(k, l) = v;
            V(l, k) = v;
        }
    }
    return V;
}

Eigen::MatrixXd assemble_double_layer(const BoundaryGeometry& g) {
    const int n = g.size();
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
            const Eigen::VectorXd m = double_layer_moments(g, k, l, 1);
            // hats on the source segment: (1 -/+ xi)/2 at its two endpoints
            K(k, l) += 0.5 * (m[0] - m[1]);
            K(k, (l + 1) % n) += 0.5 * (m[0] + m[1]);
        }
    }
    return K;
}

Eigen::MatrixXd assemble_boundary_mass(const BoundaryGeometry& g) {
    const int n = g.size();
    Eigen::MatrixXd Mb = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        Mb(k, k) += 0.5 * g.length[k];
        Mb(k, (k + 1) % n) += 0.5 * g.length[k];
    }
    return Mb;
}

Eigen::MatrixXd assemble_single_layer(const PrimalMesh& mesh) {
    return assemble_single_layer(BoundaryGeometry::from_mesh(mesh));
}

Eigen::MatrixXd assemble_double_layer(const PrimalMesh& mesh) {
    return assemble_double_layer(BoundaryGeometry::from_mesh(mesh));
}

Eigen::MatrixXd assemble_boundary_mass(const PrimalMesh& mesh) {
    return assemble_boundary_mass(BoundaryGeometry::from_mesh(mesh));
}

BemMatrices assemble_bem(const PrimalMesh& mesh) {
    const BoundaryGeometry g = BoundaryGeometry::from_mesh(mesh);
    return BemMatrices{assemble_single_layer(g), assemble_double_layer(g),
                       assemble_boundary_mass(g)};
}

double v_energy_norm(const Eigen::MatrixXd& V, const Eigen::VectorXd& psi) {
    const double s = psi.dot(V * psi);
    const double scale = V.cwiseAbs().maxCoeff() * psi.squaredNorm();
    if (s < -1e-12 * std::max(scale, 1e-300))
        throw numerical_error("v_energy_norm: negative quadratic form");
    return std::sqrt(std::max(s, 0.0));
}

namespace {

// Winding-number point-in-polygon test over the boundary loop.
bool strictly_outside(const PrimalMesh& mesh, const Vec2& x) {
    double angle = 0.0;
    for (int k = 0; k < mesh.n_boundary_edges(); ++k) {
        const Vec2 a = mesh.vertices[mesh.boundary_edges[k][0]] - x;
        const Vec2 b = mesh.vertices[mesh.boundary_edges[k][1]] - x;
        const double na = norm(a), nb = norm(b);
        if (na < 1e-14 || nb < 1e-14) return false; // on a vertex
        angle += std::atan2(cross(a, b), dot(a, b));
    }
    return std::abs(angle) < M_PI; // ~0 outside, ~2pi inside
}

} // namespace

std::vector<double> evaluate_exterior(const PrimalMesh& mesh,
                                      const Eigen::VectorXd& trace,
                                      const Eigen::VectorXd& density,
                                      const std::vector<Vec2>& points) {
    const BoundaryGeometry g = BoundaryGeometry::from_mesh(mesh);
    const int n = g.size();
    std::vector<double> values;
    values.reserve(points.size());
    double moments[2];
    for (const Vec2& x : points) {
        if (!strictly_outside(mesh, x))
            throw config_error("evaluate_exterior: point not strictly outside the domain");
        double u = 0.0;
        for (int k = 0; k < n; ++k) {
            const double th0 = trace[mesh.boundary_vertices[k]];
            const double th1 = trace[mesh.boundary_vertices[(k + 1) % n]];
            double_layer_inner(g, k, x, 1, moments);
            u += 0.5 * (th0 + th1) * moments[0] + 0.5 * (th1 - th0) * moments[1];
            // - integral of G times the flux density
            u += kInv2Pi * density[k] * log_inner(x, g.start[k], g.end[k]);
        }
        values.push_back(u);
    }
    return values;
}

double log_capacity_coefficient(const PrimalMesh& mesh, const Eigen::VectorXd& density) {
    double a = 0.0;
    for (int k = 0; k < mesh.n_boundary_edges(); ++k)
        a += density[k] * mesh.boundary_length(k);
    return kInv2Pi * a;
}

} // namespace fvmbem

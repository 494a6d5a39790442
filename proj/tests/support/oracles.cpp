#include "support/oracles.hpp"

#include <cmath>

#include "support/adaptive.hpp"

namespace fvmbem::testing {

namespace {

constexpr double kInv2Pi = 1.0 / (2.0 * M_PI);

bool near_point(const Vec2& a, const Vec2& b, double scale) {
    return dist(a, b) <= 1e-12 * scale;
}

// Parameter of the point on segment [s0, s1] closest to x, clamped to (0, L).
double closest_parameter(const Vec2& x, const Vec2& s0, const Vec2& s1) {
    const double len = dist(s0, s1);
    const Vec2 dir = (s1 - s0) / len;
    return std::clamp(dot(dir, x - s0), 0.0, len);
}

// Break points graded geometrically around the near-singular parameter, so
// every sub-interval sees the kernel tail at its own scale.
std::vector<double> graded_breaks(double center, double inner_scale, double length) {
    std::vector<double> breaks{center};
    double r = std::max(inner_scale, 1e-14 * length);
    while (r < 2.0 * length) {
        if (center + r < length) breaks.push_back(center + r);
        if (center - r > 0.0) breaks.push_back(center - r);
        r *= 4.0;
    }
    return breaks;
}

} // namespace

double oracle_log_pair(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1,
                       double rel_tol) {
    const double la = dist(a0, a1), lb = dist(b0, b1);
    const double scale = std::max(la, lb);
    const double magnitude = la * lb * (1.0 + std::abs(std::log(scale)));
    const double tol = rel_tol * magnitude;
    const bool fwd = near_point(a0, b0, scale) && near_point(a1, b1, scale);
    const bool rev = near_point(a0, b1, scale) && near_point(a1, b0, scale);
    if (fwd || rev) {
        // identical segment: reduce over the difference tau = |s - t|
        return adaptive_integrate(
            [la](double tau) { return 2.0 * (la - tau) * std::log(tau); }, 0.0, la, tol);
    }
    const Vec2 dir_a = (a1 - a0) / la;
    const Vec2 dir_b = (b1 - b0) / lb;
    // x(s) - y(t) = base + s dir_a - t dir_b; keeping the difference in this
    // local form avoids cancellation noise when the segments touch.
    const Vec2 base = a0 - b0;
    auto inner = [&](double s) {
        const Vec2 x = a0 + dir_a * s;
        const double split = closest_parameter(x, b0, b1);
        const double gap = std::abs(cross(dir_b, base + dir_a * s));
        return adaptive_integrate(
            [&](double t) {
                const Vec2 d = base + dir_a * s - dir_b * t;
                return 0.5 * std::log(dot(d, d));
            },
            0.0, lb, 0.05 * tol / la, graded_breaks(split, gap, lb), 40);
    };
    std::vector<double> outer_breaks;
    // touching segments produce endpoint kinks in the outer integrand
    for (const Vec2& p : {b0, b1}) {
        const double s = dot(dir_a, p - a0);
        if (s > 1e-12 * la && s < la * (1.0 - 1e-12)) outer_breaks.push_back(s);
    }
    return adaptive_integrate([&](double s) { return inner(s); }, 0.0, la, tol,
                              outer_breaks, 20);
}

double oracle_single_layer_entry(const Vec2& a0, const Vec2& a1, const Vec2& b0,
                                 const Vec2& b1, double rel_tol) {
    return -kInv2Pi * oracle_log_pair(a0, a1, b0, b1, rel_tol);
}

double oracle_double_layer_entry(const Vec2& a0, const Vec2& a1, const Vec2& b0,
                                 const Vec2& b1, double d0, double d1, double rel_tol) {
    const double la = dist(a0, a1), lb = dist(b0, b1);
    const double magnitude =
        la * (std::abs(d0) + std::abs(d1) + 1e-3) * 0.5; // kernel integral is O(1)
    const double tol = rel_tol * magnitude;
    const Vec2 dir_a = (a1 - a0) / la;
    const Vec2 dir_b = (b1 - b0) / lb;
    const Vec2 n_b = rot_cw(dir_b);
    const Vec2 base = a0 - b0; // see oracle_log_pair on the local difference
    auto inner = [&](double s) {
        const Vec2 x = a0 + dir_a * s;
        const double split = closest_parameter(x, b0, b1);
        const double gap = std::abs(cross(dir_b, base + dir_a * s));
        return adaptive_integrate(
            [&](double t) {
                const Vec2 d = base + dir_a * s - dir_b * t;
                const double r2 = dot(d, d);
                const double density = d0 + (d1 - d0) * (t / lb);
                return kInv2Pi * density * dot(d, n_b) / r2;
            },
            0.0, lb, 0.05 * tol / la, graded_breaks(split, gap, lb), 40);
    };
    std::vector<double> outer_breaks;
    for (const Vec2& p : {b0, b1}) {
        const double s = dot(dir_a, p - a0);
        if (s > 1e-12 * la && s < la * (1.0 - 1e-12)) outer_breaks.push_back(s);
    }
    return adaptive_integrate([&](double s) { return inner(s); }, 0.0, la, tol,
                              outer_breaks, 20);
}

namespace {

// Integral over a straight segment with 10-point Gauss (the assembly itself
// uses 2 points, so quadrature choices stay distinct).
template <typename F>
double seg_integral(const Vec2& p, const Vec2& q, F&& f) {
    return integrate_segment(p, q, 10, std::forward<F>(f));
}

} // namespace

double oracle_coupled_form(const PrimalMesh& mesh, const DualMesh& dual,
                           const CoefficientSet& coeffs,
                           const BoundaryClassification& cls, UpwindType upwind,
                           const Eigen::VectorXd& trial, const Eigen::VectorXd& test) {
    const int n1 = mesh.n_vertices();
    const int n2 = mesh.n_boundary_edges();
    const NodalFunction u{&mesh, trial.head(n1)};
    const Eigen::VectorXd phi = trial.tail(n2);
    const Eigen::VectorXd v = test.head(n1);
    const Eigen::VectorXd psi = test.tail(n2);

    double form = 0.0;

    // volume-equation row: sum over vertices of v_i times the box balance
    for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
        const DualInterface& iface = dual.interfaces[e];
        // diffusion through the interface
        double diffusive = 0.0;
        for (int s = 0; s < iface.n_segments; ++s) {
            const DualSegment& seg = iface.segments[s];
            const Vec2 grad = u.gradient(seg.tri);
            diffusive += seg_integral(seg.a, seg.b, [&](const Vec2& x) {
                const Eigen::Matrix2d A = coeffs.A(x, seg.tri);
                const Vec2 flux{A(0, 0) * grad.x + A(0, 1) * grad.y,
                                A(1, 0) * grad.x + A(1, 1) * grad.y};
                return -dot(flux, seg.normal);
            });
        }
        double convective = 0.0;
        if (upwind == UpwindType::none) {
            for (int s = 0; s < iface.n_segments; ++s) {
                const DualSegment& seg = iface.segments[s];
                convective += seg_integral(seg.a, seg.b, [&](const Vec2& x) {
                    return dot(coeffs.b(x), seg.normal) * u.eval(seg.tri, x);
                });
            }
        } else {
            double flux_bn = 0.0;
            Eigen::Matrix2d a_avg = Eigen::Matrix2d::Zero();
            for (int s = 0; s < iface.n_segments; ++s) {
                const DualSegment& seg = iface.segments[s];
                flux_bn += seg_integral(seg.a, seg.b, [&](const Vec2& x) {
                    return dot(coeffs.b(x), seg.normal);
                });
                for (int r = 0; r < 2; ++r)
                    for (int c = 0; c < 2; ++c)
                        a_avg(r, c) += seg_integral(seg.a, seg.b, [&](const Vec2& x) {
                            return coeffs.A(x, seg.tri)(r, c);
                        });
            }
            const double beta = flux_bn / iface.total_length;
            const double denom = (a_avg / iface.total_length).cwiseAbs().maxCoeff();
            double lambda;
            if (upwind == UpwindType::full) {
                lambda = beta > 0.0 ? 1.0 : (beta < 0.0 ? 0.0 : 0.5);
            } else {
                const double pe =
                    denom == 0.0 ? (beta > 0 ? 1e300 : (beta < 0 ? -1e300 : 0.0))
                                 : beta * iface.total_length / denom;
                const double m = pe == 0.0 ? 1.0 : std::min(2.0 / std::abs(pe), 1.0);
                lambda = pe < 0.0 ? 0.5 * m : 1.0 - 0.5 * m;
            }
            const double u_if = lambda * u.values[iface.vi] + (1.0 - lambda) * u.values[iface.vj];
            convective = flux_bn * u_if;
        }
        form += (v[iface.vi] - v[iface.vj]) * (diffusive + convective);
    }

    // reaction over each box (adaptive per sub-triangle of the sub-quads)
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        for (int k = 0; k < 3; ++k) {
            const int vi = mesh.triangles[t][k];
            const auto& quad = dual.subquads[t][k];
            const std::array<std::array<Vec2, 3>, 2> halves = {
                {{quad[0], quad[1], quad[2]}, {quad[0], quad[2], quad[3]}}};
            const TriangleRule rule = triangle_rule_collapsed(8);
            for (const auto& tri : halves)
                form += v[vi] * integrate_triangle(tri[0], tri[1], tri[2], rule,
                                                   [&](const Vec2& x) {
                                                       return coeffs.c(x) * u.eval(t, x);
                                                   });
        }
    }

    // outflow boundary convection, tested with the box characteristic halves
    for (int kb = 0; kb < n2; ++kb) {
        if (cls.tag[kb] != EdgeFlow::outflow) continue;
        const int va = mesh.boundary_edges[kb][0];
        const int vb = mesh.boundary_edges[kb][1];
        const Vec2 pa = mesh.vertices[va], pb = mesh.vertices[vb];
        const Vec2 m = (pa + pb) * 0.5;
        const Vec2 n = mesh.boundary_normal(kb);
        const int tri = mesh.edges[mesh.boundary_edge_ids[kb]].tri[0];
        auto bu = [&](const Vec2& x) { return dot(coeffs.b(x), n) * u.eval(tri, x); };
        form += v[va] * seg_integral(pa, m, bu);
        form += v[vb] * seg_integral(m, pb, bu);
    }

    // -<phi, I* v> on the boundary
    for (int kb = 0; kb < n2; ++kb) {
        const double half = 0.5 * mesh.boundary_length(kb);
        form -= phi[kb] * half * (v[mesh.boundary_edges[kb][0]] + v[mesh.boundary_edges[kb][1]]);
    }

    // <(1/2 - K) u, psi> + <V phi, psi> with adaptive kernel integrals
    for (int kb = 0; kb < n2; ++kb) {
        if (psi[kb] == 0.0) continue;
        const Vec2 e0 = mesh.vertices[mesh.boundary_edges[kb][0]];
        const Vec2 e1 = mesh.vertices[mesh.boundary_edges[kb][1]];
        const int tri = mesh.edges[mesh.boundary_edge_ids[kb]].tri[0];
        double row = 0.5 * seg_integral(e0, e1, [&](const Vec2& x) { return u.eval(tri, x); });
        for (int lb = 0; lb < n2; ++lb) {
            const Vec2 s0 = mesh.vertices[mesh.boundary_edges[lb][0]];
            const Vec2 s1 = mesh.vertices[mesh.boundary_edges[lb][1]];
            row -= oracle_double_layer_entry(e0, e1, s0, s1,
                                             u.values[mesh.boundary_edges[lb][0]],
                                             u.values[mesh.boundary_edges[lb][1]]);
            row += phi[lb] * oracle_single_layer_entry(e0, e1, s0, s1);
        }
        form += psi[kb] * row;
    }
    return form;
}

double oracle_box_load(const PrimalMesh& mesh, const DualMesh& dual, int vertex,
                       const TimeScalarField& f, const TimeScalarField& g2, double t) {
    double sum = 0.0;
    for (int tri : mesh.vertex_tris[vertex]) {
        int k = 0;
        while (mesh.triangles[tri][k] != vertex) ++k;
        const auto& quad = dual.subquads[tri][k];
        const std::array<std::array<Vec2, 3>, 2> halves = {
            {{quad[0], quad[1], quad[2]}, {quad[0], quad[2], quad[3]}}};
        const TriangleRule rule = triangle_rule_collapsed(16);
        for (const auto& cell : halves)
            sum += integrate_triangle(cell[0], cell[1], cell[2], rule,
                                      [&](const Vec2& x) { return f(x, t); });
    }
    for (int kb = 0; kb < mesh.n_boundary_edges(); ++kb) {
        const int va = mesh.boundary_edges[kb][0];
        const int vb = mesh.boundary_edges[kb][1];
        if (va != vertex && vb != vertex) continue;
        const Vec2 pa = mesh.vertices[va], pb = mesh.vertices[vb];
        const Vec2 m = (pa + pb) * 0.5;
        const Vec2 h0 = va == vertex ? pa : m;
        const Vec2 h1 = va == vertex ? m : pb;
        sum += integrate_segment(h0, h1, 12, [&](const Vec2& x) { return g2(x, t); });
    }
    return sum;
}

double eval_nodal_anywhere(const PrimalMesh& mesh, const Eigen::VectorXd& values,
                           const Vec2& x) {
    const NodalFunction u{&mesh, values};
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tr = mesh.triangles[t];
        const Vec2 a = mesh.vertices[tr[0]], b = mesh.vertices[tr[1]], c = mesh.vertices[tr[2]];
        const double area = signed_area(a, b, c);
        const double l0 = signed_area(x, b, c) / area;
        const double l1 = signed_area(a, x, c) / area;
        const double l2 = 1.0 - l0 - l1;
        if (l0 >= -1e-12 && l1 >= -1e-12 && l2 >= -1e-12) return u.eval(t, x);
    }
    throw std::runtime_error("eval_nodal_anywhere: point outside mesh");
}

Vec2 grad_nodal_anywhere(const PrimalMesh& mesh, const Eigen::VectorXd& values,
                         const Vec2& x) {
    const NodalFunction u{&mesh, values};
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tr = mesh.triangles[t];
        const Vec2 a = mesh.vertices[tr[0]], b = mesh.vertices[tr[1]], c = mesh.vertices[tr[2]];
        const double area = signed_area(a, b, c);
        const double l0 = signed_area(x, b, c) / area;
        const double l1 = signed_area(a, x, c) / area;
        const double l2 = 1.0 - l0 - l1;
        if (l0 >= -1e-12 && l1 >= -1e-12 && l2 >= -1e-12) return u.gradient(t);
    }
    throw std::runtime_error("grad_nodal_anywhere: point outside mesh");
}

} // namespace fvmbem::testing

#include "fvmbem/convergence.hpp"

#include <cmath>

#include "fvmbem/spaces.hpp"

namespace fvmbem {

namespace {

// Squared H1 error of a nodal vector against the exact field at fixed time.
double h1_error_squared(const Eigen::VectorXd& u_vec, const ExactSolution& exact,
                        const PrimalMesh& mesh, double t, int quad_refine) {
    const TriangleRule& rule = triangle_rule(6);
    const NodalFunction uh{&mesh, u_vec};
    double sum = 0.0;
    for (int tri = 0; tri < mesh.n_triangles(); ++tri) {
        const auto& tr = mesh.triangles[tri];
        const Vec2 pa = mesh.vertices[tr[0]], pb = mesh.vertices[tr[1]], pc = mesh.vertices[tr[2]];
        const Vec2 grad_h = uh.gradient(tri);
        auto cell = [&](const Vec2& a, const Vec2& b, const Vec2& c, auto&& self,
                        int depth) -> double {
            if (depth > 0) {
                const Vec2 mab = (a + b) * 0.5, mbc = (b + c) * 0.5, mca = (c + a) * 0.5;
                return self(a, mab, mca, self, depth - 1) + self(mab, b, mbc, self, depth - 1) +
                       self(mca, mbc, c, self, depth - 1) + self(mab, mbc, mca, self, depth - 1);
            }
            return integrate_triangle(a, b, c, rule, [&](const Vec2& x) {
                const double du = uh.eval(tri, x) - exact.u(x, t);
                const Vec2 dg = grad_h - exact.grad_u(x, t);
                return du * du + dot(dg, dg);
            });
        };
        sum += cell(pa, pb, pc, cell, quad_refine);
    }
    return sum;
}

} // namespace

double error_H_T(const TrajectorySolution& traj, const ExactSolution& exact,
                 const PrimalMesh& mesh, int quad_refine) {
    const GaussRule& g3 = gauss_legendre(3);
    double total = 0.0;
    for (int n = 1; n <= traj.grid.n_steps(); ++n) {
        const double t0 = traj.grid.knots[n - 1], t1 = traj.grid.knots[n];
        const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
        for (std::size_t q = 0; q < g3.nodes.size(); ++q) {
            const double t = mid + half * g3.nodes[q];
            const Eigen::VectorXd u_t = traj.interior_at(n, t);
            total += half * g3.weights[q] * h1_error_squared(u_t, exact, mesh, t, quad_refine);
        }
    }
    return std::sqrt(total);
}

FluxErrorContext::FluxErrorContext(const PrimalMesh& mesh)
    : fine_(BoundaryGeometry::from_mesh(mesh).refined()),
      V_fine_(assemble_single_layer(fine_)) {}

Eigen::VectorXd FluxErrorContext::project_fine(const ScalarField& g) const {
    Eigen::VectorXd out(fine_.size());
    for (int k = 0; k < fine_.size(); ++k)
        out[k] = integrate_segment(fine_.start[k], fine_.end[k], 8, g) / fine_.length[k];
    return out;
}

Eigen::VectorXd FluxErrorContext::prolong(const Eigen::VectorXd& coarse) const {
    Eigen::VectorXd out(2 * coarse.size());
    for (int k = 0; k < coarse.size(); ++k) {
        out[2 * k] = coarse[k];
        out[2 * k + 1] = coarse[k];
    }
    return out;
}

double error_flux(const TrajectorySolution& traj, const ExactSolution& exact,
                  const PrimalMesh& mesh, const FluxErrorContext& ctx) {
    (void)mesh;
    const GaussRule& g3 = gauss_legendre(3);
    double total = 0.0;
    for (int n = 1; n <= traj.grid.n_steps(); ++n) {
        const double t0 = traj.grid.knots[n - 1], t1 = traj.grid.knots[n];
        const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
        const Eigen::VectorXd phi_fine = ctx.prolong(traj.phi[n - 1]);
        for (std::size_t q = 0; q < g3.nodes.size(); ++q) {
            const double t = mid + half * g3.nodes[q];
            const auto& geo = ctx.fine_geometry();
            // edge means of the exact flux, taken with each segment's normal
            Eigen::VectorXd diff(geo.size());
            for (int seg = 0; seg < geo.size(); ++seg) {
                const Vec2 nrm = geo.normal[seg];
                diff[seg] = integrate_segment(geo.start[seg], geo.end[seg], 8,
                                              [&](const Vec2& x) {
                                                  return exact.flux(x, nrm, t);
                                              }) /
                            geo.length[seg];
            }
            diff -= phi_fine;
            const double e = ctx.norm(diff);
            total += half * g3.weights[q] * e * e;
        }
    }
    return std::sqrt(total);
}

std::vector<double> compute_eoc(const std::vector<double>& h,
                                const std::vector<double>& errors) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> eoc(errors.size(), nan);
    for (std::size_t l = 1; l < errors.size(); ++l) {
        if (errors[l - 1] <= 0.0 || errors[l] <= 0.0 || h[l - 1] == h[l]) continue;
        eoc[l] = std::log(errors[l - 1] / errors[l]) / std::log(h[l - 1] / h[l]);
    }
    return eoc;
}

void ConvergenceReport::compute_rates() {
    std::vector<double> h, ev, eh, es;
    for (const auto& r : rows) {
        h.push_back(r.h);
        ev.push_back(r.err_V);
        eh.push_back(r.err_H1);
        es.push_back(r.err_sum);
    }
    eoc_V = compute_eoc(h, ev);
    eoc_H1 = compute_eoc(h, eh);
    eoc_sum = compute_eoc(h, es);
}

} // namespace fvmbem

#include "fvmbem/fvm.hpp"

#include <cmath>
#include <limits>

namespace fvmbem {

std::vector<std::string> validate_coefficients(const CoefficientSet& coeffs,
                                               const PrimalMesh& mesh) {
    std::vector<std::string> warnings;
    bool a_ok = true, sym_ok = true, parab_ok = true;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const Vec2 x = mesh.barycenter(t);
        const Eigen::Matrix2d A = coeffs.A(x, t);
        if (std::abs(A(0, 1) - A(1, 0)) > 1e-12 * (1.0 + A.cwiseAbs().maxCoeff()))
            sym_ok = false;
        const double tr = A(0, 0) + A(1, 1);
        const double det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
        const double lmin = 0.5 * (tr - std::sqrt(std::max(0.0, tr * tr - 4.0 * det)));
        if (lmin <= 0.0) a_ok = false;
        if (coeffs.div_b) {
            if (0.5 * coeffs.div_b(x) + coeffs.c(x) <= 0.0) parab_ok = false;
        }
    }
    if (!sym_ok) warnings.push_back("diffusion matrix is not symmetric at sample points");
    if (!a_ok) warnings.push_back("diffusion matrix is not positive definite at sample points");
    if (!parab_ok) warnings.push_back("(1/2) div b + c <= 0 at sample points");
    return warnings;
}

double UpwindScheme::weight(double peclet) const {
    switch (type) {
    case UpwindType::none:
        throw config_error("UpwindScheme::weight: scheme 'none' has no weight function");
    case UpwindType::full: {
        const double sgn = peclet > 0.0 ? 1.0 : (peclet < 0.0 ? -1.0 : 0.0);
        return 0.5 * (sgn + 1.0);
    }
    case UpwindType::steerable: {
        if (std::isinf(peclet)) return peclet > 0.0 ? 1.0 : 0.0;
        const double m = peclet == 0.0 ? 1.0 : std::min(2.0 / std::abs(peclet), 1.0);
        return peclet < 0.0 ? 0.5 * m : 1.0 - 0.5 * m;
    }
    }
    return 0.5;
}

namespace {

// Tests coefficient evaluations for finiteness as required by the assembly
// error contract.
void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw numerical_error(std::string("assemble_fvm: non-finite ") + what);
}

struct Accumulator {
    std::vector<Eigen::Triplet<double>> trips;
    void add(int i, int j, double v) { trips.emplace_back(i, j, v); }
};

// Diffusion flux of every trial hat through the dual interfaces, plus
// reaction over the boxes and the outflow boundary term; shared between the
// plain and the upwinded form.
void assemble_nonconvection_parts(const PrimalMesh& mesh, const DualMesh& dual,
                                  const CoefficientSet& coeffs,
                                  const BoundaryClassification& cls,
                                  Accumulator& acc) {
    const GaussRule& g2pt = gauss_legendre(2);
    for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
        const DualInterface& iface = dual.interfaces[e];
        for (int s = 0; s < iface.n_segments; ++s) {
            const DualSegment& seg = iface.segments[s];
            const int tri = seg.tri;
            const auto grads = mesh.hat_gradients(tri);
            const auto& tr = mesh.triangles[tri];
            const Vec2 mid = (seg.a + seg.b) * 0.5;
            const Vec2 half = (seg.b - seg.a) * 0.5;
            const double jac = 0.5 * seg.length;
            for (int q = 0; q < 2; ++q) {
                const Vec2 x = mid + half * g2pt.nodes[q];
                const Eigen::Matrix2d A = coeffs.A(x, tri);
                check_finite(A.sum(), "diffusion coefficient");
                for (int k = 0; k < 3; ++k) {
                    const Vec2 Agrad{A(0, 0) * grads[k].x + A(0, 1) * grads[k].y,
                                     A(1, 0) * grads[k].x + A(1, 1) * grads[k].y};
                    const double flux = -dot(Agrad, seg.normal) * jac * g2pt.weights[q];
                    acc.add(iface.vi, tr[k], flux);
                    acc.add(iface.vj, tr[k], -flux);
                }
            }
        }
    }

    // reaction over boxes
    for_each_box_quad_node(dual, [&](const Vec2& x, double w, int t, int k) {
        const double cv = coeffs.c(x);
        check_finite(cv, "reaction coefficient");
        const auto& tr = mesh.triangles[t];
        const Vec2 pa = mesh.vertices[tr[0]], pb = mesh.vertices[tr[1]], pc = mesh.vertices[tr[2]];
        const double area = signed_area(pa, pb, pc);
        const double l0 = signed_area(x, pb, pc) / area;
        const double l1 = signed_area(pa, x, pc) / area;
        const double l2 = 1.0 - l0 - l1;
        acc.add(tr[k], tr[0], cv * w * l0);
        acc.add(tr[k], tr[1], cv * w * l1);
        acc.add(tr[k], tr[2], cv * w * l2);
    });

    // outflow part of the boundary: b.n u_h tested with the box halves
    const GaussRule& g2b = gauss_legendre(2);
    for (int kb = 0; kb < mesh.n_boundary_edges(); ++kb) {
        if (cls.tag[kb] != EdgeFlow::outflow) continue;
        const int va = mesh.boundary_edges[kb][0];
        const int vb = mesh.boundary_edges[kb][1];
        const Vec2 pa = mesh.vertices[va], pb = mesh.vertices[vb];
        const Vec2 m = (pa + pb) * 0.5;
        const Vec2 n = mesh.boundary_normal(kb);
        const double h_e = mesh.boundary_length(kb);
        // half [pa,m] tests the box of va, half [m,pb] the box of vb
        for (int half = 0; half < 2; ++half) {
            const Vec2 h0 = half == 0 ? pa : m;
            const Vec2 h1 = half == 0 ? m : pb;
            const int row = half == 0 ? va : vb;
            const Vec2 mid = (h0 + h1) * 0.5;
            const Vec2 hlf = (h1 - h0) * 0.5;
            for (int q = 0; q < 2; ++q) {
                const Vec2 x = mid + hlf * g2b.nodes[q];
                const double bn = dot(coeffs.b(x), n);
                check_finite(bn, "velocity");
                // trace of u_h on the edge involves only the endpoint hats
                const double lam = dist(x, pa) / h_e; // hat at vb
                const double w = 0.25 * h_e * g2b.weights[q];
                acc.add(row, va, bn * (1.0 - lam) * w);
                acc.add(row, vb, bn * lam * w);
            }
        }
    }
}

SparseMat finalize(Accumulator& acc, int n) {
    SparseMat M(n, n);
    M.setFromTriplets(acc.trips.begin(), acc.trips.end());
    return M;
}

double matrix_scale(const Eigen::Matrix2d& A, InterfaceMatrixNorm which) {
    switch (which) {
    case InterfaceMatrixNorm::max_entry:
        return A.cwiseAbs().maxCoeff();
    case InterfaceMatrixNorm::frobenius:
        return A.norm();
    case InterfaceMatrixNorm::row_sum:
        return A.cwiseAbs().rowwise().sum().maxCoeff();
    }
    return A.cwiseAbs().maxCoeff();
}

} // namespace

SparseMat assemble_fvm(const PrimalMesh& mesh, const DualMesh& dual,
                       const CoefficientSet& coeffs,
                       const BoundaryClassification& cls) {
    Accumulator acc;
    acc.trips.reserve(40 * mesh.n_triangles());
    assemble_nonconvection_parts(mesh, dual, coeffs, cls, acc);

    // Galerkin interface convection: b u_h with the affine trace of u_h
    const GaussRule& g2pt = gauss_legendre(2);
    for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
        const DualInterface& iface = dual.interfaces[e];
        for (int s = 0; s < iface.n_segments; ++s) {
            const DualSegment& seg = iface.segments[s];
            const int tri = seg.tri;
            const auto& tr = mesh.triangles[tri];
            const Vec2 pa = mesh.vertices[tr[0]], pb = mesh.vertices[tr[1]], pc = mesh.vertices[tr[2]];
            const double area = signed_area(pa, pb, pc);
            const Vec2 mid = (seg.a + seg.b) * 0.5;
            const Vec2 half = (seg.b - seg.a) * 0.5;
            const double jac = 0.5 * seg.length;
            for (int q = 0; q < 2; ++q) {
                const Vec2 x = mid + half * g2pt.nodes[q];
                const double bn = dot(coeffs.b(x), seg.normal);
                check_finite(bn, "velocity");
                const double l0 = signed_area(x, pb, pc) / area;
                const double l1 = signed_area(pa, x, pc) / area;
                const double l2 = 1.0 - l0 - l1;
                const double w = jac * g2pt.weights[q];
                const std::array<double, 3> lambda = {l0, l1, l2};
                for (int k = 0; k < 3; ++k) {
                    const double flux = bn * lambda[k] * w;
                    acc.add(iface.vi, tr[k], flux);
                    acc.add(iface.vj, tr[k], -flux);
                }
            }
        }
    }
    return finalize(acc, mesh.n_vertices());
}

SparseMat assemble_fvm_upwind(const PrimalMesh& mesh, const DualMesh& dual,
                              const CoefficientSet& coeffs,
                              const BoundaryClassification& cls,
                              const UpwindScheme& scheme,
                              const FvmOptions& options) {
    if (scheme.type == UpwindType::none)
        throw config_error("assemble_fvm_upwind: scheme must be full or steerable");
    Accumulator acc;
    acc.trips.reserve(40 * mesh.n_triangles());
    assemble_nonconvection_parts(mesh, dual, coeffs, cls, acc);

    for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
        const DualInterface& iface = dual.interfaces[e];
        const InterfaceStats stats = interface_stats(mesh, dual, coeffs, static_cast<int>(e));
        check_finite(stats.beta, "velocity");
        const double flux_total = stats.beta * stats.length;
        const double a_scale = matrix_scale(stats.a_avg, options.peclet_norm);
        double peclet;
        if (a_scale == 0.0)
            peclet = stats.beta > 0.0
                         ? std::numeric_limits<double>::infinity()
                         : (stats.beta < 0.0 ? -std::numeric_limits<double>::infinity() : 0.0);
        else
            peclet = flux_total / a_scale;
        const double lam = scheme.weight(peclet);
        // u_{h,ij} = lam u(a_i) + (1-lam) u(a_j); flux enters row i with +,
        // row j with the opposite sign.
        acc.add(iface.vi, iface.vi, flux_total * lam);
        acc.add(iface.vi, iface.vj, flux_total * (1.0 - lam));
        acc.add(iface.vj, iface.vi, -flux_total * lam);
        acc.add(iface.vj, iface.vj, -flux_total * (1.0 - lam));
    }
    return finalize(acc, mesh.n_vertices());
}

InterfaceStats interface_stats(const PrimalMesh& mesh, const DualMesh& dual,
                               const CoefficientSet& coeffs, int edge) {
    (void)mesh;
    const GaussRule& g2pt = gauss_legendre(2);
    const DualInterface& iface = dual.interfaces[edge];
    InterfaceStats stats;
    stats.length = iface.total_length;
    double flux_total = 0.0;
    for (int s = 0; s < iface.n_segments; ++s) {
        const DualSegment& seg = iface.segments[s];
        const Vec2 mid = (seg.a + seg.b) * 0.5;
        const Vec2 half = (seg.b - seg.a) * 0.5;
        const double jac = 0.5 * seg.length;
        for (int q = 0; q < 2; ++q) {
            const Vec2 x = mid + half * g2pt.nodes[q];
            const double w = jac * g2pt.weights[q];
            flux_total += dot(coeffs.b(x), seg.normal) * w;
            stats.a_avg += coeffs.A(x, seg.tri) * w;
        }
    }
    stats.beta = flux_total / stats.length;
    stats.a_avg /= stats.length;
    return stats;
}

Eigen::VectorXd assemble_fvm_rhs(const PrimalMesh& mesh, const DualMesh& dual,
                                 const TimeScalarField& f,
                                 const TimeScalarField& g2, double t) {
    InteriorLoadCache cache(mesh, dual);
    return cache.assemble(f, g2, t);
}

InteriorLoadCache::InteriorLoadCache(const PrimalMesh& mesh, const DualMesh& dual)
    : n_(mesh.n_vertices()) {
    for_each_box_quad_node(dual, [&](const Vec2& x, double w, int t, int k) {
        volume_nodes_.push_back({x, w, mesh.triangles[t][k]});
    });
    const GaussRule& g4 = gauss_legendre(4);
    for (int kb = 0; kb < mesh.n_boundary_edges(); ++kb) {
        const Vec2 pa = mesh.vertices[mesh.boundary_edges[kb][0]];
        const Vec2 pb = mesh.vertices[mesh.boundary_edges[kb][1]];
        const Vec2 m = (pa + pb) * 0.5;
        for (int half = 0; half < 2; ++half) {
            const Vec2 h0 = half == 0 ? pa : m;
            const Vec2 h1 = half == 0 ? m : pb;
            const int row = mesh.boundary_edges[kb][half];
            const Vec2 mid = (h0 + h1) * 0.5;
            const Vec2 hlf = (h1 - h0) * 0.5;
            const double jac = 0.5 * dist(h0, h1);
            for (std::size_t q = 0; q < g4.nodes.size(); ++q)
                boundary_nodes_.push_back({mid + hlf * g4.nodes[q], jac * g4.weights[q], row});
        }
    }
}

Eigen::VectorXd InteriorLoadCache::assemble(const TimeScalarField& f,
                                            const TimeScalarField& g2, double t) const {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_);
    for (const Node& nd : volume_nodes_) {
        const double v = f(nd.x, t);
        if (!std::isfinite(v)) throw numerical_error("assemble_fvm_rhs: non-finite source value");
        rhs[nd.row] += nd.w * v;
    }
    for (const Node& nd : boundary_nodes_) {
        const double v = g2(nd.x, t);
        if (!std::isfinite(v)) throw numerical_error("assemble_fvm_rhs: non-finite flux jump value");
        rhs[nd.row] += nd.w * v;
    }
    return rhs;
}

} // namespace fvmbem

#include "fvmbem/spaces.hpp"

#include <Eigen/SparseCholesky>

namespace fvmbem {

double NodalFunction::eval(int t, const Vec2& x) const {
    const auto& tr = mesh->triangles[t];
    const Vec2 a = mesh->vertices[tr[0]], b = mesh->vertices[tr[1]], c = mesh->vertices[tr[2]];
    const double area = signed_area(a, b, c);
    const double l0 = signed_area(x, b, c) / area;
    const double l1 = signed_area(a, x, c) / area;
    const double l2 = 1.0 - l0 - l1;
    return l0 * values[tr[0]] + l1 * values[tr[1]] + l2 * values[tr[2]];
}

Vec2 NodalFunction::gradient(int t) const {
    const auto grads = mesh->hat_gradients(t);
    const auto& tr = mesh->triangles[t];
    Vec2 g{0.0, 0.0};
    for (int k = 0; k < 3; ++k) g += grads[k] * values[tr[k]];
    return g;
}

BoxFunction interpolate_to_boxes(const NodalFunction& v, const DualMesh& dual) {
    if (v.mesh != dual.primal)
        throw config_error("interpolate_to_boxes: function and dual mesh disagree");
    return BoxFunction{&dual, v.values};
}

namespace {

// Exact integral of an affine function over the (vertex, triangle) quad:
// split along the vertex-barycenter diagonal, centroid rule per half.
double integrate_affine_over_quad(const std::array<Vec2, 4>& quad,
                                  const std::function<double(const Vec2&)>& affine) {
    const double a1 = signed_area(quad[0], quad[1], quad[2]);
    const double a2 = signed_area(quad[0], quad[2], quad[3]);
    const Vec2 c1 = (quad[0] + quad[1] + quad[2]) / 3.0;
    const Vec2 c2 = (quad[0] + quad[2] + quad[3]) / 3.0;
    return a1 * affine(c1) + a2 * affine(c2);
}

} // namespace

double chi_inner_product(const NodalFunction& v, const NodalFunction& w,
                         const DualMesh& dual) {
    if (v.mesh != dual.primal || w.mesh != dual.primal)
        throw config_error("chi_inner_product: mesh mismatch");
    const PrimalMesh& mesh = *dual.primal;
    double sum = 0.0;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        for (int k = 0; k < 3; ++k) {
            const int vi = mesh.triangles[t][k];
            const double box_part = integrate_affine_over_quad(
                dual.subquads[t][k], [&](const Vec2& x) { return v.eval(t, x); });
            sum += w.values[vi] * box_part;
        }
    }
    return sum;
}

SparseMat assemble_chi_mass(const PrimalMesh& mesh, const DualMesh& dual) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(9 * mesh.n_triangles());
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tr = mesh.triangles[t];
        const Vec2 pa = mesh.vertices[tr[0]], pb = mesh.vertices[tr[1]], pc = mesh.vertices[tr[2]];
        const double area = signed_area(pa, pb, pc);
        for (int k = 0; k < 3; ++k) {
            for (int j = 0; j < 3; ++j) {
                auto hat_j = [&](const Vec2& x) {
                    const double l0 = signed_area(x, pb, pc) / area;
                    const double l1 = signed_area(pa, x, pc) / area;
                    const double l2 = 1.0 - l0 - l1;
                    return j == 0 ? l0 : (j == 1 ? l1 : l2);
                };
                const double val = integrate_affine_over_quad(dual.subquads[t][k], hat_j);
                trips.emplace_back(tr[k], tr[j], val);
            }
        }
    }
    SparseMat M(mesh.n_vertices(), mesh.n_vertices());
    M.setFromTriplets(trips.begin(), trips.end());
    return M;
}

SparseMat assemble_p1_mass(const PrimalMesh& mesh) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(9 * mesh.n_triangles());
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const double a12 = mesh.tri_area(t) / 12.0;
        const auto& tr = mesh.triangles[t];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                trips.emplace_back(tr[i], tr[j], (i == j ? 2.0 : 1.0) * a12);
    }
    SparseMat M(mesh.n_vertices(), mesh.n_vertices());
    M.setFromTriplets(trips.begin(), trips.end());
    return M;
}

NodalFunction project_L2_nodal(const PrimalMesh& mesh, const ScalarField& g) {
    const SparseMat M = assemble_p1_mass(mesh);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(mesh.n_vertices());
    const TriangleRule& rule = triangle_rule(6);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tr = mesh.triangles[t];
        const Vec2 pa = mesh.vertices[tr[0]], pb = mesh.vertices[tr[1]], pc = mesh.vertices[tr[2]];
        const double area = mesh.tri_area(t);
        for (std::size_t p = 0; p < rule.points.size(); ++p) {
            const double l1 = rule.points[p].l1, l2 = rule.points[p].l2;
            const double l3 = 1.0 - l1 - l2;
            const Vec2 x = pa * l1 + pb * l2 + pc * l3;
            const double gw = g(x) * area * rule.weights[p];
            rhs[tr[0]] += gw * l1;
            rhs[tr[1]] += gw * l2;
            rhs[tr[2]] += gw * l3;
        }
    }
    Eigen::SimplicialLDLT<SparseMat> solver(M);
    if (solver.info() != Eigen::Success)
        throw numerical_error("project_L2_nodal: mass matrix factorization failed");
    NodalFunction out{&mesh, solver.solve(rhs)};
    const double res = (M * out.values - rhs).norm();
    if (!std::isfinite(res) || res > 1e-10 * (1.0 + rhs.norm()))
        throw numerical_error("project_L2_nodal: mass solve did not converge");
    return out;
}

BoundaryDensity project_boundary_mean(const PrimalMesh& mesh, const ScalarField& g) {
    BoundaryDensity out{&mesh, Eigen::VectorXd(mesh.n_boundary_edges())};
    for (int k = 0; k < mesh.n_boundary_edges(); ++k) {
        const Vec2 a = mesh.vertices[mesh.boundary_edges[k][0]];
        const Vec2 b = mesh.vertices[mesh.boundary_edges[k][1]];
        out.values[k] = integrate_segment(a, b, 8, g) / mesh.boundary_length(k);
    }
    return out;
}

double integrate_over_box(const DualMesh& dual, int vertex, const ScalarField& f) {
    const PrimalMesh& mesh = *dual.primal;
    double sum = 0.0;
    for (int t : mesh.vertex_tris[vertex]) {
        int k = 0;
        while (mesh.triangles[t][k] != vertex) ++k;
        const auto& quad = dual.subquads[t][k];
        const std::array<std::array<Vec2, 3>, 2> halves = {
            {{quad[0], quad[1], quad[2]}, {quad[0], quad[2], quad[3]}}};
        const TriangleRule& rule = triangle_rule(4);
        for (const auto& tri : halves)
            sum += integrate_triangle(tri[0], tri[1], tri[2], rule, f);
    }
    return sum;
}

} // namespace fvmbem

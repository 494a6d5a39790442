#pragma once

#include <Eigen/Sparse>

#include "fvmbem/mesh.hpp"
#include "fvmbem/quadrature.hpp"

namespace fvmbem {

using SparseMat = Eigen::SparseMatrix<double>;

/// Continuous piecewise-linear function: one coefficient per vertex.
struct NodalFunction {
    const PrimalMesh* mesh = nullptr;
    Eigen::VectorXd values;

    /// Evaluate inside triangle t at point x (barycentric interpolation).
    double eval(int t, const Vec2& x) const;
    /// Constant gradient on triangle t.
    Vec2 gradient(int t) const;
};

/// Piecewise-constant boundary density: one coefficient per boundary edge.
struct BoundaryDensity {
    const PrimalMesh* mesh = nullptr;
    Eigen::VectorXd values;
};

/// Piecewise-constant function on the dual boxes: one coefficient per vertex.
struct BoxFunction {
    const DualMesh* dual = nullptr;
    Eigen::VectorXd values;
};

/// Piecewise-constant interpolation: box coefficient i is v(a_i).
BoxFunction interpolate_to_boxes(const NodalFunction& v, const DualMesh& dual);

/// <v, I* w> over the domain, computed exactly per sub-quadrilateral
/// (centroid rule on the two halves of each quad; exact for affine v).
double chi_inner_product(const NodalFunction& v, const NodalFunction& w,
                         const DualMesh& dual);

/// Mass matrix M_ij = integral of the hat function of vertex j over box i.
SparseMat assemble_chi_mass(const PrimalMesh& mesh, const DualMesh& dual);

/// Standard piecewise-linear mass matrix (exact local |K|/12 blocks).
SparseMat assemble_p1_mass(const PrimalMesh& mesh);

/// L2-orthogonal projection onto the nodal space.
NodalFunction project_L2_nodal(const PrimalMesh& mesh, const ScalarField& g);

/// Edge-wise integral means of a boundary field.
BoundaryDensity project_boundary_mean(const PrimalMesh& mesh, const ScalarField& g);

/// Integral of f over box i: degree-4 Gauss on the two halves of each
/// sub-quadrilateral of the box.
double integrate_over_box(const DualMesh& dual, int vertex, const ScalarField& f);

/// Applies a functor q(point, weight, triangle, local_vertex) at every box
/// quadrature node of the mesh (degree-4 rule on split sub-quadrilaterals);
/// shared by reaction, mass-like and load assembly.
template <typename F>
void for_each_box_quad_node(const DualMesh& dual, F&& q) {
    const PrimalMesh& mesh = *dual.primal;
    const TriangleRule& rule = triangle_rule(4);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        for (int k = 0; k < 3; ++k) {
            const auto& quad = dual.subquads[t][k];
            const std::array<std::array<Vec2, 3>, 2> halves = {
                {{quad[0], quad[1], quad[2]}, {quad[0], quad[2], quad[3]}}};
            for (const auto& tri : halves) {
                const double area = signed_area(tri[0], tri[1], tri[2]);
                for (std::size_t p = 0; p < rule.points.size(); ++p) {
                    const double l1 = rule.points[p].l1, l2 = rule.points[p].l2;
                    const Vec2 x = tri[0] * l1 + tri[1] * l2 + tri[2] * (1.0 - l1 - l2);
                    q(x, area * rule.weights[p], t, k);
                }
            }
        }
    }
}

} // namespace fvmbem

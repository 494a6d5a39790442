#pragma once

#include <Eigen/Dense>

#include "fvmbem/mesh.hpp"

namespace fvmbem {

/// Closed polygonal boundary as a flat list of straight segments in loop
/// order; segment k runs from vertex k to vertex k+1 (mod size). Outward
/// normals are the clockwise rotation of the segment direction.
struct BoundaryGeometry {
    std::vector<Vec2> start;
    std::vector<Vec2> end;
    std::vector<double> length;
    std::vector<Vec2> normal;

    int size() const { return static_cast<int>(start.size()); }
    Vec2 midpoint(int k) const { return (start[k] + end[k]) * 0.5; }
    Vec2 direction(int k) const { return (end[k] - start[k]) / length[k]; }

    static BoundaryGeometry from_mesh(const PrimalMesh& mesh);
    /// Each segment split at its midpoint (2x finer boundary mesh).
    BoundaryGeometry refined() const;
};

/// Galerkin matrices of the boundary integral operators for the coupling:
/// V tested/trialed with edge characteristics, K and the boundary mass Mb
/// trialed with the traces of the nodal hats (columns follow the boundary
/// vertex ordering of the mesh).
struct BemMatrices {
    Eigen::MatrixXd V;  // n_edges x n_edges, symmetric positive definite
    Eigen::MatrixXd K;  // n_edges x n_boundary_vertices
    Eigen::MatrixXd Mb; // n_edges x n_boundary_vertices, h_E/2 at endpoints
};

/// Double integral of log|x-y| over a pair of segments; closed forms for the
/// identical and touching cases, analytic inner antiderivative with Gauss
/// outer integration otherwise.
double log_pair_integral(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1);

/// Galerkin entry <V chi_l, chi_k> of the single layer operator.
double single_layer_entry(const BoundaryGeometry& g, int k, int l);

/// Galerkin moments of the double layer kernel: entry j of the result is
/// the integral over test segment k of the kernel times xi^j on the source
/// segment l (xi the [-1,1] coordinate of the source).
Eigen::VectorXd double_layer_moments(const BoundaryGeometry& g, int k, int l, int max_degree);

Eigen::MatrixXd assemble_single_layer(const BoundaryGeometry& g);
Eigen::MatrixXd assemble_double_layer(const BoundaryGeometry& g);
Eigen::MatrixXd assemble_boundary_mass(const BoundaryGeometry& g);

Eigen::MatrixXd assemble_single_layer(const PrimalMesh& mesh);
Eigen::MatrixXd assemble_double_layer(const PrimalMesh& mesh);
Eigen::MatrixXd assemble_boundary_mass(const PrimalMesh& mesh);
BemMatrices assemble_bem(const PrimalMesh& mesh);

/// Energy norm sqrt(psi' V psi); a negative quadratic form signals a domain
/// with diameter >= 1 or an assembly defect.
double v_energy_norm(const Eigen::MatrixXd& V, const Eigen::VectorXd& psi);

/// Exterior field from Cauchy data via layer potentials: trace is a nodal
/// vector over all mesh vertices (boundary entries used), density is
/// piecewise constant per boundary edge. Points must lie strictly outside.
std::vector<double> evaluate_exterior(const PrimalMesh& mesh,
                                      const Eigen::VectorXd& trace,
                                      const Eigen::VectorXd& density,
                                      const std::vector<Vec2>& points);

/// Logarithmic capacity coefficient a = (1/2pi) integral of the density.
double log_capacity_coefficient(const PrimalMesh& mesh, const Eigen::VectorXd& density);

} // namespace fvmbem

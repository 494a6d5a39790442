#pragma once

// Independent oracles: adaptive-quadrature kernel integrals and a direct
// evaluation of the coupled bilinear form straight from its definition.
// Nothing here shares code with the assembly paths it checks.

#include "fvmbem/coupling.hpp"

namespace fvmbem::testing {

/// Double integral of log|x-y| over two segments by adaptive quadrature
/// (1D reduction for the identical case, nested otherwise). rel_tol is
/// turned into an absolute tolerance from the segment scales.
double oracle_log_pair(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1,
                       double rel_tol = 1e-9);

/// Galerkin single layer entry by adaptive quadrature.
double oracle_single_layer_entry(const Vec2& a0, const Vec2& a1, const Vec2& b0,
                                 const Vec2& b1, double rel_tol = 1e-9);

/// Integral over the test segment of the double layer potential of a density
/// that is linear on the source segment (values d0 at b0, d1 at b1).
double oracle_double_layer_entry(const Vec2& a0, const Vec2& a1, const Vec2& b0,
                                 const Vec2& b1, double d0, double d1,
                                 double rel_tol = 1e-10);

/// Box-scheme bilinear form evaluated from its definition with independent
/// (high order) quadrature: trial (u, phi), test (v, psi) stacked as in the
/// assembled block system. Kernel integrals use the adaptive oracles, so this
/// is slow and meant for coarse meshes.
double oracle_coupled_form(const PrimalMesh& mesh, const DualMesh& dual,
                           const CoefficientSet& coeffs,
                           const BoundaryClassification& cls, UpwindType upwind,
                           const Eigen::VectorXd& trial, const Eigen::VectorXd& test);

/// Interior load functional (f against the box characteristic of each vertex
/// plus g2 on the box boundary) by adaptive quadrature over sub-triangles.
double oracle_box_load(const PrimalMesh& mesh, const DualMesh& dual, int vertex,
                       const TimeScalarField& f, const TimeScalarField& g2, double t);

/// Locate the triangle containing x (brute force) and evaluate a nodal vector.
double eval_nodal_anywhere(const PrimalMesh& mesh, const Eigen::VectorXd& values,
                           const Vec2& x);
Vec2 grad_nodal_anywhere(const PrimalMesh& mesh, const Eigen::VectorXd& values,
                         const Vec2& x);

} // namespace fvmbem::testing

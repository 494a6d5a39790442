#pragma once

#include "fvmbem/bem.hpp"
#include "fvmbem/timestepping.hpp"

namespace fvmbem {

/// Closed-form reference solution pair: interior field u with gradient and
/// exterior harmonic field with gradient (its normal trace is the flux).
struct ExactSolution {
    TimeScalarField u;
    TimeVectorField grad_u;
    TimeScalarField u_ext;
    TimeVectorField grad_u_ext;

    double flux(const Vec2& x, const Vec2& n, double t) const {
        return dot(grad_u_ext(x, t), n);
    }
};

/// L2-in-time H1-in-space error of the piecewise-linear-in-time trajectory:
/// 3-point Gauss per slab, degree-6 Gauss per triangle. quad_refine > 0
/// subdivides every triangle 4^quad_refine times for sensitivity checks.
double error_H_T(const TrajectorySolution& traj, const ExactSolution& exact,
                 const PrimalMesh& mesh, int quad_refine = 0);

/// Gram data of the energy norm on the doubly refined boundary mesh.
class FluxErrorContext {
public:
    explicit FluxErrorContext(const PrimalMesh& mesh);

    /// Edge means of a boundary field on the refined segments.
    Eigen::VectorXd project_fine(const ScalarField& g) const;
    /// Piecewise-constant prolongation of a coarse edge vector.
    Eigen::VectorXd prolong(const Eigen::VectorXd& coarse) const;
    double norm(const Eigen::VectorXd& fine) const { return v_energy_norm(V_fine_, fine); }
    const BoundaryGeometry& fine_geometry() const { return fine_; }

private:
    BoundaryGeometry fine_;
    Eigen::MatrixXd V_fine_;
};

/// L2-in-time energy-norm error of the piecewise-constant-in-time flux.
double error_flux(const TrajectorySolution& traj, const ExactSolution& exact,
                  const PrimalMesh& mesh, const FluxErrorContext& ctx);

/// Experimental orders of convergence between consecutive refinement levels;
/// entry l compares levels l-1 and l (entry 0 and non-positive errors give NaN).
std::vector<double> compute_eoc(const std::vector<double>& h,
                                const std::vector<double>& errors);

/// One refinement level of a convergence study.
struct ConvergenceRow {
    int level = 0;
    double h = 0.0;
    double tau = 0.0;
    double err_V = 0.0;
    double err_H1 = 0.0;
    double err_sum = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    std::vector<double> eoc_V, eoc_H1, eoc_sum; // NaN where undefined

    void compute_rates();
};

} // namespace fvmbem

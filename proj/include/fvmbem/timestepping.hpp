#pragma once

#include <array>
#include <memory>

#include "fvmbem/coupling.hpp"

namespace fvmbem {

/// Partition 0 = t0 < ... < tN = T of the time interval.
struct TimeGrid {
    std::vector<double> knots;

    static TimeGrid uniform(double T, int steps);

    int n_steps() const { return static_cast<int>(knots.size()) - 1; }
    double tau(int n) const { return knots[n] - knots[n - 1]; } // n = 1..N
    double max_tau() const;
    void validate() const;
};

/// Per-step coefficient vectors: u has N+1 entries (u[0] is the projected
/// initial datum), phi has N entries (phi[n-1] belongs to step n; the flux
/// is piecewise constant in time, the interior solution piecewise linear).
struct TrajectorySolution {
    TimeGrid grid;
    std::vector<Eigen::VectorXd> u;
    std::vector<Eigen::VectorXd> phi;

    /// Interior coefficients linearly interpolated inside slab n at time t.
    Eigen::VectorXd interior_at(int n, double t) const;
};

enum class TimeScheme { variant, classical };

/// Linear-in-time weight whose slab average reproduces endpoint values of
/// polynomials up to degree one.
double slab_weight(double t, double t0, double t1);

/// 3-point Gauss nodes and combined weights (c_k) such that the weighted
/// average of v over the slab is sum c_k v(t_k); exact through degree 4.
std::array<std::pair<double, double>, 3> weighted_average_nodes(double t0, double t1);

/// Factorized step matrix [(1/tau) M + A, Ctb; Kb, V] for one step size.
class StepSolver {
public:
    StepSolver(const CoupledSystem& system, double tau);
    /// Solves for the stacked state (U, Phi); checks the relative residual.
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
    double tau() const { return tau_; }

private:
    const CoupledSystem* system_;
    double tau_;
    SparseMat matrix_;
    Eigen::SparseLU<SparseMat> lu_;
};

/// One implicit Euler step with data averaged against the slab weight.
std::pair<Eigen::VectorXd, Eigen::VectorXd>
step_variant_euler(const CoupledSystem& system, const LoadAssembler& loads,
                   const TimeScalarField& f, const TimeScalarField& g1,
                   const TimeScalarField& g2, const TimeGrid& grid, int n,
                   const Eigen::VectorXd& u_prev);

/// One implicit Euler step with data evaluated at the step endpoint.
std::pair<Eigen::VectorXd, Eigen::VectorXd>
step_classical_euler(const CoupledSystem& system, const LoadAssembler& loads,
                     const TimeScalarField& f, const TimeScalarField& g1,
                     const TimeScalarField& g2, const TimeGrid& grid, int n,
                     const Eigen::VectorXd& u_prev);

/// Full time loop from the projected initial datum; the factorization is
/// reused across steps with equal step size.
TrajectorySolution run_time_loop(const CoupledSystem& system, const LoadAssembler& loads,
                                 const TimeScalarField& f, const TimeScalarField& g1,
                                 const TimeScalarField& g2, const ScalarField& q,
                                 const TimeGrid& grid, TimeScheme scheme);

} // namespace fvmbem

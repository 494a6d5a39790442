#include "fvmbem/timestepping.hpp"

#include <cmath>

namespace fvmbem {

TimeGrid TimeGrid::uniform(double T, int steps) {
    if (steps < 1 || T <= 0.0)
        throw config_error("TimeGrid::uniform: need T > 0 and at least one step");
    TimeGrid grid;
    grid.knots.resize(steps + 1);
    for (int n = 0; n <= steps; ++n) grid.knots[n] = T * n / steps;
    return grid;
}

double TimeGrid::max_tau() const {
    double m = 0.0;
    for (int n = 1; n <= n_steps(); ++n) m = std::max(m, tau(n));
    return m;
}

void TimeGrid::validate() const {
    if (n_steps() < 1) throw config_error("TimeGrid: need at least one step");
    if (std::abs(knots.front()) > 1e-14) throw config_error("TimeGrid: must start at 0");
    for (int n = 1; n <= n_steps(); ++n)
        if (tau(n) <= 0.0) throw config_error("TimeGrid: knots must be strictly increasing");
}

Eigen::VectorXd TrajectorySolution::interior_at(int n, double t) const {
    const double t0 = grid.knots[n - 1], t1 = grid.knots[n];
    const double s = (t - t0) / (t1 - t0);
    return (1.0 - s) * u[n - 1] + s * u[n];
}

double slab_weight(double t, double t0, double t1) {
    const double tau = t1 - t0;
    return (6.0 * t - 2.0 * t1 - 4.0 * t0) / tau;
}

std::array<std::pair<double, double>, 3> weighted_average_nodes(double t0, double t1) {
    const GaussRule& rule = gauss_legendre(3);
    std::array<std::pair<double, double>, 3> out;
    const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
    for (int k = 0; k < 3; ++k) {
        const double tk = mid + half * rule.nodes[k];
        out[k] = {tk, 0.5 * rule.weights[k] * slab_weight(tk, t0, t1)};
    }
    return out;
}

StepSolver::StepSolver(const CoupledSystem& system, double tau)
    : system_(&system), tau_(tau) {
    matrix_ = system.stationary_matrix();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(system.M_chi.nonZeros());
    for (int c = 0; c < system.M_chi.outerSize(); ++c)
        for (SparseMat::InnerIterator it(system.M_chi, c); it; ++it)
            trips.emplace_back(it.row(), it.col(), it.value() / tau);
    SparseMat shift(matrix_.rows(), matrix_.cols());
    shift.setFromTriplets(trips.begin(), trips.end());
    matrix_ += shift;
    matrix_.makeCompressed();
    lu_.compute(matrix_);
    if (lu_.info() != Eigen::Success)
        throw numerical_error("StepSolver: singular step matrix");
}

Eigen::VectorXd StepSolver::solve(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd x = lu_.solve(rhs);
    const double res = (matrix_ * x - rhs).norm();
    if (!std::isfinite(res) || res > 1e-8 * (1.0 + rhs.norm()))
        throw numerical_error("StepSolver: solve residual too large");
    return x;
}

namespace {

std::pair<Eigen::VectorXd, Eigen::VectorXd>
advance(const CoupledSystem& system, const StepSolver& solver, const LoadVector& load,
        double tau, const Eigen::VectorXd& u_prev) {
    Eigen::VectorXd rhs(system.n1 + system.n2);
    rhs.head(system.n1) = system.M_chi * u_prev / tau + load.interior;
    rhs.tail(system.n2) = load.boundary;
    const Eigen::VectorXd x = solver.solve(rhs);
    return {x.head(system.n1), x.tail(system.n2)};
}

LoadVector averaged_load(const LoadAssembler& loads, const TimeScalarField& f,
                         const TimeScalarField& g1, const TimeScalarField& g2,
                         double t0, double t1) {
    LoadVector acc;
    bool first = true;
    for (const auto& [tk, ck] : weighted_average_nodes(t0, t1)) {
        LoadVector part = loads.assemble(f, g1, g2, tk);
        if (first) {
            acc.interior = ck * part.interior;
            acc.boundary = ck * part.boundary;
            first = false;
        } else {
            acc.interior += ck * part.interior;
            acc.boundary += ck * part.boundary;
        }
    }
    return acc;
}

} // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd>
step_variant_euler(const CoupledSystem& system, const LoadAssembler& loads,
                   const TimeScalarField& f, const TimeScalarField& g1,
                   const TimeScalarField& g2, const TimeGrid& grid, int n,
                   const Eigen::VectorXd& u_prev) {
    const double tau = grid.tau(n);
    const StepSolver solver(system, tau);
    const LoadVector load =
        averaged_load(loads, f, g1, g2, grid.knots[n - 1], grid.knots[n]);
    return advance(system, solver, load, tau, u_prev);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd>
step_classical_euler(const CoupledSystem& system, const LoadAssembler& loads,
                     const TimeScalarField& f, const TimeScalarField& g1,
                     const TimeScalarField& g2, const TimeGrid& grid, int n,
                     const Eigen::VectorXd& u_prev) {
    const double tau = grid.tau(n);
    const StepSolver solver(system, tau);
    const LoadVector load = loads.assemble(f, g1, g2, grid.knots[n]);
    return advance(system, solver, load, tau, u_prev);
}

TrajectorySolution run_time_loop(const CoupledSystem& system, const LoadAssembler& loads,
                                 const TimeScalarField& f, const TimeScalarField& g1,
                                 const TimeScalarField& g2, const ScalarField& q,
                                 const TimeGrid& grid, TimeScheme scheme) {
    grid.validate();
    TrajectorySolution traj;
    traj.grid = grid;
    traj.u.reserve(grid.n_steps() + 1);
    traj.phi.reserve(grid.n_steps());
    traj.u.push_back(project_L2_nodal(*system.mesh, q).values);

    std::unique_ptr<StepSolver> solver;
    for (int n = 1; n <= grid.n_steps(); ++n) {
        const double tau = grid.tau(n);
        if (!solver || std::abs(solver->tau() - tau) > 1e-14 * tau)
            solver = std::make_unique<StepSolver>(system, tau);
        LoadVector load;
        try {
            load = scheme == TimeScheme::variant
                       ? averaged_load(loads, f, g1, g2, grid.knots[n - 1], grid.knots[n])
                       : loads.assemble(f, g1, g2, grid.knots[n]);
            auto [u_n, phi_n] = advance(system, *solver, load, tau, traj.u.back());
            traj.u.push_back(std::move(u_n));
            traj.phi.push_back(std::move(phi_n));
        } catch (const numerical_error& err) {
            throw numerical_error("time step " + std::to_string(n) + ": " + err.what());
        }
    }
    return traj;
}

} // namespace fvmbem

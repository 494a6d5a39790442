#include "fvmbem/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>

#include "fvmbem/io.hpp"

namespace fvmbem {

namespace {

struct LevelSolution {
    PrimalMesh mesh;
    DualMesh dual;
    TrajectorySolution traj;
};

LevelSolution solve_level(const ProblemSpec& problem, int level, double spacing,
                          double tau, const StudyOptions& options) {
    LevelSolution out;
    out.mesh = problem.build_mesh(level, spacing * std::pow(2.0, level));
    out.dual = build_dual(out.mesh);

    if (options.print_warnings) {
        for (const std::string& w : validate_coefficients(problem.coeffs, out.mesh))
            std::cerr << "warning (" << problem.name << "): " << w << "\n";
    }

    const BoundaryClassification cls = classify_boundary(out.mesh, problem.coeffs.b);
    const BemMatrices bem = assemble_bem(out.mesh);
    UpwindScheme scheme{options.upwind.value_or(problem.upwind)};
    const CoupledSystem system =
        assemble_system(out.mesh, out.dual, problem.coeffs, scheme, bem, cls, options.fvm);
    const LoadAssembler loads(out.mesh, out.dual);

    const int steps = static_cast<int>(std::lround(problem.T / tau));
    if (steps < 1 || std::abs(steps * tau - problem.T) > 1e-10 * problem.T)
        throw config_error("time step does not divide the horizon");
    const TimeGrid grid = TimeGrid::uniform(problem.T, steps);

    out.traj = run_time_loop(system, loads, problem.f, problem.g1, problem.g2,
                             problem.q, grid, options.method.value_or(problem.method));
    return out;
}

} // namespace

ConvergenceReport run_convergence(const ProblemSpec& problem, const StudyOptions& options) {
    if (!problem.exact)
        throw config_error("run_convergence: problem '" + problem.name +
                           "' has no exact solution");
    if (options.levels < 1) throw config_error("run_convergence: need at least one level");

    ConvergenceReport report;
    for (int level = 0; level < options.levels; ++level) {
        const double spacing = options.base_spacing / std::pow(2.0, level);
        const double tau = options.base_tau / std::pow(2.0, level);
        StudyOptions level_options = options;
        level_options.print_warnings = options.print_warnings && level == 0;
        const LevelSolution sol = solve_level(problem, level, spacing, tau, level_options);

        ConvergenceRow row;
        row.level = level;
        row.h = spacing;
        row.tau = tau;
        row.err_H1 = error_H_T(sol.traj, *problem.exact, sol.mesh, options.quad_refine);
        const FluxErrorContext flux_ctx(sol.mesh);
        row.err_V = error_flux(sol.traj, *problem.exact, sol.mesh, flux_ctx);
        row.err_sum = row.err_H1 + row.err_V;
        report.rows.push_back(row);
    }
    report.compute_rates();
    return report;
}

SnapshotResult run_snapshots(const ProblemSpec& problem, double spacing, double tau,
                             const std::vector<double>& times,
                             const std::string& output_prefix,
                             const StudyOptions& options) {
    for (double t : times)
        if (t < 0.0 || t > problem.T)
            throw config_error("run_snapshots: requested time outside the horizon");

    const LevelSolution sol = solve_level(problem, 0, spacing, tau, options);

    SnapshotResult result;
    for (const Eigen::VectorXd& u : sol.traj.u)
        result.max_abs_nodal = std::max(result.max_abs_nodal, u.cwiseAbs().maxCoeff());

    for (double t : times) {
        const int knot = std::min(static_cast<int>(std::lround(t / tau)),
                                  sol.traj.grid.n_steps());
        const Eigen::VectorXd& u = sol.traj.u[knot];
        char name[64];
        std::snprintf(name, sizeof(name), "%s_t%.6f.vtk", output_prefix.c_str(),
                      sol.traj.grid.knots[knot]);
        write_vtk(name, sol.mesh, &u);
        result.files.push_back(name);
        int arg = 0;
        u.maxCoeff(&arg);
        result.argmax_position.push_back(sol.mesh.vertices[arg]);
        result.max_value.push_back(u[arg]);
    }
    return result;
}

namespace {

bool report_check(const char* what, bool ok) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << what << "\n";
    return ok;
}

} // namespace

int run_selftest() {
    int failures = 0;
    auto check = [&](const char* what, bool ok) {
        if (!report_check(what, ok)) ++failures;
    };

    const PrimalMesh mesh = build_uniform_square_mesh({0.0, 0.0}, 0.5, 0.125);
    const DualMesh dual = build_dual(mesh);

    double box_sum = 0.0;
    for (double a : dual.box_area) box_sum += a;
    check("dual boxes partition the domain",
          std::abs(box_sum - mesh.total_area()) < 1e-12);

    const double t0 = 0.3, t1 = 0.55, tau = t1 - t0;
    double mass = 0.0, lin = 0.0;
    for (const auto& [tk, ck] : weighted_average_nodes(t0, t1)) {
        mass += ck;
        lin += ck * tk;
    }
    const double sq = integrate_segment(
        Vec2{t0, 0.0}, Vec2{t1, 0.0}, 3, [&](const Vec2& p) {
            const double w = slab_weight(p.x, t0, t1);
            return w * w;
        });
    check("slab weight has unit average", std::abs(mass - 1.0) < 1e-12);
    check("slab weight reproduces the endpoint of linear data",
          std::abs(lin - t1) < 1e-12);
    check("slab weight squared integral equals 4 tau",
          std::abs(sq - 4.0 * tau) < 1e-12);

    CoefficientSet laplace;
    laplace.A = [](const Vec2&, int) { return Eigen::Matrix2d::Identity().eval(); };
    laplace.b = [](const Vec2&) { return Vec2{0.0, 0.0}; };
    laplace.c = [](const Vec2&) { return 0.0; };
    BoundaryClassification cls = classify_boundary(mesh, laplace.b);
    const SparseMat fvm = assemble_fvm(mesh, dual, laplace, cls);
    const SparseMat fem = assemble_fem_interior(mesh, laplace, cls);
    const double coincide =
        (Eigen::MatrixXd(fvm) - Eigen::MatrixXd(fem)).cwiseAbs().maxCoeff();
    check("box and Galerkin Laplacians coincide", coincide < 1e-12);

    const Eigen::MatrixXd V = assemble_single_layer(mesh);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(V);
    check("single layer matrix is positive definite", eig.eigenvalues().minCoeff() > 0.0);
    const double L = 0.125;
    const double self_ref = L * L / (2.0 * M_PI) * (1.5 - std::log(L));
    check("single layer self entry matches the closed form",
          std::abs(V(0, 0) - self_ref) < 1e-13);

    UpwindScheme steer{UpwindType::steerable};
    check("steerable weight values",
          std::abs(steer.weight(4.0) - 0.75) < 1e-15 &&
              std::abs(steer.weight(-4.0) - 0.25) < 1e-15 &&
              std::abs(steer.weight(1.0) - 0.5) < 1e-15);

    return failures;
}

} // namespace fvmbem

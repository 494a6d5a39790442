#pragma once

#include <map>
#include <optional>

#include "fvmbem/problems.hpp"

namespace fvmbem {

/// Knobs of a convergence study / snapshot run. Method and upwind default to
/// the problem's own choices.
struct StudyOptions {
    int levels = 5;
    double base_spacing = 0.125;
    double base_tau = 0.05;
    std::optional<TimeScheme> method;
    std::optional<UpwindType> upwind;
    FvmOptions fvm;
    int quad_refine = 0;
    bool print_warnings = true;
};

/// Simultaneous uniform refinement study: level l runs at spacing
/// base_spacing/2^l and step base_tau/2^l, and evaluates the energy errors
/// against the problem's exact solution.
ConvergenceReport run_convergence(const ProblemSpec& problem, const StudyOptions& options = {});

struct SnapshotResult {
    std::vector<std::string> files;
    /// Largest |nodal value| over the entire trajectory.
    double max_abs_nodal = 0.0;
    /// Per requested time: maximizing vertex position and value.
    std::vector<Vec2> argmax_position;
    std::vector<double> max_value;
};

/// Runs the problem at one resolution and writes a VTK file with the nodal
/// field at the knot nearest to each requested time.
SnapshotResult run_snapshots(const ProblemSpec& problem, double spacing, double tau,
                             const std::vector<double>& times,
                             const std::string& output_prefix,
                             const StudyOptions& options = {});

/// Compact built-in oracle checks (mesh partitions, weight identities,
/// FVM/FEM coincidence, boundary operator spot values). Returns the number
/// of failed checks and prints one line per check.
int run_selftest();

} // namespace fvmbem

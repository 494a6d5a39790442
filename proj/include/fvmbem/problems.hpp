#pragma once

#include <optional>
#include <string>

#include "fvmbem/convergence.hpp"

namespace fvmbem {

/// Complete description of one interface problem: domain, coefficients,
/// data fields, horizon, discretization choices and (when manufactured)
/// the exact solution pair.
struct ProblemSpec {
    enum class Domain { square, lshape };

    std::string name;
    Domain domain = Domain::square;
    Vec2 corner{0.0, 0.0}; // square domains
    double side = 0.5;

    CoefficientSet coeffs;
    TimeScalarField f;
    TimeScalarField g1;
    TimeScalarField g2;
    ScalarField q;
    double T = 1.0;
    std::optional<ExactSolution> exact;

    UpwindType upwind = UpwindType::none;
    TimeScheme method = TimeScheme::variant;

    /// Structured mesh at spacing base_spacing / 2^level.
    PrimalMesh build_mesh(int level, double base_spacing = 0.125) const;
};

/// Convection-dominated problem with an interior tanh layer, a jumping
/// scalar diffusion and a logarithmic exterior field. Full upwinding.
ProblemSpec problem_tanh_layer();

/// Pure diffusion with a nonsmooth corner-singular interior solution on the
/// L-shaped domain and a full matrix diffusion coefficient.
ProblemSpec problem_lshape();

/// Rotating transport of two transient box sources; no exact solution.
/// The diffusion threshold reproduces the printed definition, under which
/// the lower value is never active on this domain.
ProblemSpec problem_transport(double alpha_threshold = 0.25);

ProblemSpec make_problem(const std::string& name);

/// Checks g1 = u - u_e and g2 = (A grad u - [b u on inflow]) . n - dn u_e at
/// random boundary samples; returns the worst absolute mismatch.
double exact_consistency_error(const ProblemSpec& problem, const PrimalMesh& mesh,
                               int samples_per_edge = 3, unsigned seed = 7u);

} // namespace fvmbem

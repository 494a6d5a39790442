#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fvmbem/spaces.hpp"

namespace fvmbem {

/// Diffusion matrix, velocity field and reaction coefficient of the
/// interior equation. div_b, if present, enables the parabolicity check.
struct CoefficientSet {
    MatrixField A;
    VectorField b;
    ScalarField c;
    std::function<double(const Vec2&)> div_b;
};

/// Samples the coefficient invariants (A symmetric positive definite,
/// (1/2) div b + c > 0) and returns human-readable warnings; violations do
/// not abort assembly.
std::vector<std::string> validate_coefficients(const CoefficientSet& coeffs,
                                               const PrimalMesh& mesh);

enum class UpwindType { none, full, steerable };

/// Weight function mapping the local Peclet number to the convex-combination
/// parameter of the interface value.
struct UpwindScheme {
    UpwindType type = UpwindType::none;
    /// Value in [0,1]; accepts +-infinity arguments.
    double weight(double peclet) const;
};

/// Matrix norm used to reduce the averaged interface diffusion to the scalar
/// in the Peclet denominator.
enum class InterfaceMatrixNorm { max_entry, frobenius, row_sum };

struct FvmOptions {
    InterfaceMatrixNorm peclet_norm = InterfaceMatrixNorm::max_entry;
};

/// Finite volume matrix of the convection-diffusion-reaction form: row i
/// tests with the box of vertex i, columns are nodal trial functions.
SparseMat assemble_fvm(const PrimalMesh& mesh, const DualMesh& dual,
                       const CoefficientSet& coeffs,
                       const BoundaryClassification& cls);

/// Same form with interface convection replaced by the upwinded convex
/// combination of the two adjacent nodal values.
SparseMat assemble_fvm_upwind(const PrimalMesh& mesh, const DualMesh& dual,
                              const CoefficientSet& coeffs,
                              const BoundaryClassification& cls,
                              const UpwindScheme& scheme,
                              const FvmOptions& options = {});

/// Interface averages entering the upwind weight of one primal edge: mean
/// convection beta (against the vi -> vj normal), averaged diffusion matrix
/// and total interface length.
struct InterfaceStats {
    double beta = 0.0;
    Eigen::Matrix2d a_avg = Eigen::Matrix2d::Zero();
    double length = 0.0;
};

InterfaceStats interface_stats(const PrimalMesh& mesh, const DualMesh& dual,
                               const CoefficientSet& coeffs, int edge);

/// Right-hand side tested with box characteristic functions:
/// entry i = integral of f over box i + integral of g2 over its boundary part.
Eigen::VectorXd assemble_fvm_rhs(const PrimalMesh& mesh, const DualMesh& dual,
                                 const TimeScalarField& f,
                                 const TimeScalarField& g2, double t);

/// Precomputed quadrature layout for repeated right-hand-side assembly with
/// changing time; same rules as assemble_fvm_rhs.
class InteriorLoadCache {
public:
    InteriorLoadCache(const PrimalMesh& mesh, const DualMesh& dual);
    Eigen::VectorXd assemble(const TimeScalarField& f, const TimeScalarField& g2,
                             double t) const;

private:
    struct Node {
        Vec2 x;
        double w;
        int row;
    };
    int n_ = 0;
    std::vector<Node> volume_nodes_;
    std::vector<Node> boundary_nodes_;
};

} // namespace fvmbem

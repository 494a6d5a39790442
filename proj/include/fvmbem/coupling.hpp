#pragma once

#include "fvmbem/bem.hpp"
#include "fvmbem/fvm.hpp"

namespace fvmbem {

/// Block operator of the coupled interior/boundary problem:
///
///   [ A    Ctb ] (U  )      A   : finite volume (or FEM oracle) block
///   [ Kb   V   ] (Phi)      Ctb : -<phi, I* v> coupling, -h_E/2 per endpoint
///                           Kb  : <(1/2 - K) u, psi> = (1/2) Mb - K
///
/// plus the chi mass matrix for the time derivative. Kb columns follow the
/// boundary-vertex ordering of the mesh.
struct CoupledSystem {
    const PrimalMesh* mesh = nullptr;
    const DualMesh* dual = nullptr;
    int n1 = 0;
    int n2 = 0;
    SparseMat A;
    SparseMat Ctb; // n1 x n2
    Eigen::MatrixXd Kb;
    Eigen::MatrixXd V;
    SparseMat M_chi;

    /// Full (n1+n2) stationary matrix.
    SparseMat stationary_matrix() const;
    Eigen::MatrixXd stationary_dense() const;
    /// Apply the stationary operator to a stacked vector (U, Phi).
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
};

CoupledSystem assemble_system(const PrimalMesh& mesh, const DualMesh& dual,
                              const CoefficientSet& coeffs,
                              const UpwindScheme& scheme,
                              const BemMatrices& bem,
                              const BoundaryClassification& cls,
                              const FvmOptions& options = {});

/// Galerkin finite element block of the same form (volume integration by
/// parts instead of box testing); used as a coincidence oracle.
SparseMat assemble_fem_interior(const PrimalMesh& mesh, const CoefficientSet& coeffs,
                                const BoundaryClassification& cls);

/// H1 Gram matrix (stiffness + mass) of the nodal space.
SparseMat assemble_h1_gram(const PrimalMesh& mesh);

/// Coupled system with the FEM interior block and identical boundary blocks.
CoupledSystem assemble_fembem_oracle(const PrimalMesh& mesh, const DualMesh& dual,
                                     const CoefficientSet& coeffs,
                                     const BemMatrices& bem,
                                     const BoundaryClassification& cls);

/// Time-tagged right-hand side of the coupled system.
struct LoadVector {
    Eigen::VectorXd interior; // n1
    Eigen::VectorXd boundary; // n2
};

/// Assembles load vectors for changing time with fixed quadrature layout.
/// The g1 functional <(1/2 - K) g1, psi> integrates the continuous g1 against
/// precomputed kernel moments of its per-edge polynomial interpolant.
class LoadAssembler {
public:
    LoadAssembler(const PrimalMesh& mesh, const DualMesh& dual);

    LoadVector assemble(const TimeScalarField& f, const TimeScalarField& g1,
                        const TimeScalarField& g2, double t) const;

    static constexpr int kPolyDegree = 7;

private:
    const PrimalMesh* mesh_;
    InteriorLoadCache interior_;
    /// moments_[j](E, E') = double layer moment of xi^j, source edge E'.
    std::vector<Eigen::MatrixXd> moments_;
    Eigen::MatrixXd vandermonde_inv_; // monomial coefficients from node values
    std::vector<double> sample_nodes_;
};

/// One-shot convenience wrapper around LoadAssembler.
LoadVector assemble_load(const PrimalMesh& mesh, const DualMesh& dual,
                         const TimeScalarField& f, const TimeScalarField& g1,
                         const TimeScalarField& g2, double t);

} // namespace fvmbem

#include "fvmbem/coupling.hpp"

namespace fvmbem {

SparseMat CoupledSystem::stationary_matrix() const {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(A.nonZeros() + Ctb.nonZeros() + n2 * n2 + n2 * n2);
    for (int c = 0; c < A.outerSize(); ++c)
        for (SparseMat::InnerIterator it(A, c); it; ++it)
            trips.emplace_back(it.row(), it.col(), it.value());
    for (int c = 0; c < Ctb.outerSize(); ++c)
        for (SparseMat::InnerIterator it(Ctb, c); it; ++it)
            trips.emplace_back(it.row(), n1 + it.col(), it.value());
    const auto& bv = mesh->boundary_vertices;
    for (int e = 0; e < n2; ++e)
        for (int j = 0; j < n2; ++j)
            if (Kb(e, j) != 0.0) trips.emplace_back(n1 + e, bv[j], Kb(e, j));
    for (int e = 0; e < n2; ++e)
        for (int f = 0; f < n2; ++f)
            trips.emplace_back(n1 + e, n1 + f, V(e, f));
    SparseMat S(n1 + n2, n1 + n2);
    S.setFromTriplets(trips.begin(), trips.end());
    return S;
}

Eigen::MatrixXd CoupledSystem::stationary_dense() const {
    return Eigen::MatrixXd(stationary_matrix());
}

Eigen::VectorXd CoupledSystem::apply(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd u = x.head(n1);
    const Eigen::VectorXd phi = x.tail(n2);
    Eigen::VectorXd top = A * u + Ctb * phi;
    Eigen::VectorXd u_bv(n2);
    for (int j = 0; j < n2; ++j) u_bv[j] = u[mesh->boundary_vertices[j]];
    Eigen::VectorXd bottom = Kb * u_bv + V * phi;
    Eigen::VectorXd out(n1 + n2);
    out << top, bottom;
    return out;
}

namespace {

SparseMat coupling_block(const PrimalMesh& mesh) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(2 * mesh.n_boundary_edges());
    for (int k = 0; k < mesh.n_boundary_edges(); ++k) {
        const double half = 0.5 * mesh.boundary_length(k);
        trips.emplace_back(mesh.boundary_edges[k][0], k, -half);
        trips.emplace_back(mesh.boundary_edges[k][1], k, -half);
    }
    SparseMat C(mesh.n_vertices(), mesh.n_boundary_edges());
    C.setFromTriplets(trips.begin(), trips.end());
    return C;
}

} // namespace

CoupledSystem assemble_system(const PrimalMesh& mesh, const DualMesh& dual,
                              const CoefficientSet& coeffs,
                              const UpwindScheme& scheme,
                              const BemMatrices& bem,
                              const BoundaryClassification& cls,
                              const FvmOptions& options) {
    CoupledSystem sys;
    sys.mesh = &mesh;
    sys.dual = &dual;
    sys.n1 = mesh.n_vertices();
    sys.n2 = mesh.n_boundary_edges();
    sys.A = scheme.type == UpwindType::none
                ? assemble_fvm(mesh, dual, coeffs, cls)
                : assemble_fvm_upwind(mesh, dual, coeffs, cls, scheme, options);
    sys.Ctb = coupling_block(mesh);
    sys.Kb = 0.5 * bem.Mb - bem.K;
    sys.V = bem.V;
    sys.M_chi = assemble_chi_mass(mesh, dual);
    return sys;
}

SparseMat assemble_fem_interior(const PrimalMesh& mesh, const CoefficientSet& coeffs,
                                const BoundaryClassification& cls) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(9 * mesh.n_triangles());
    const TriangleRule& rule = triangle_rule(4);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tr = mesh.triangles[t];
        const Vec2 pa = mesh.vertices[tr[0]], pb = mesh.vertices[tr[1]], pc = mesh.vertices[tr[2]];
        const auto grads = mesh.hat_gradients(t);
        const double area = mesh.tri_area(t);
        for (std::size_t p = 0; p < rule.points.size(); ++p) {
            const double l1 = rule.points[p].l1, l2 = rule.points[p].l2;
            const double l3 = 1.0 - l1 - l2;
            const Vec2 x = pa * l1 + pb * l2 + pc * l3;
            const double w = area * rule.weights[p];
            const Eigen::Matrix2d Amat = coeffs.A(x, t);
            const Vec2 bvec = coeffs.b(x);
            const double cval = coeffs.c(x);
            const std::array<double, 3> lam = {l1, l2, l3};
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    const Vec2 Agrad{Amat(0, 0) * grads[j].x + Amat(0, 1) * grads[j].y,
                                     Amat(1, 0) * grads[j].x + Amat(1, 1) * grads[j].y};
                    double v = dot(Agrad, grads[i]) * w;
                    v -= dot(bvec, grads[i]) * lam[j] * w;
                    v += cval * lam[i] * lam[j] * w;
                    trips.emplace_back(tr[i], tr[j], v);
                }
            }
        }
    }
    // outflow boundary term b.n u v
    const GaussRule& g4 = gauss_legendre(4);
    for (int k = 0; k < mesh.n_boundary_edges(); ++k) {
        if (cls.tag[k] != EdgeFlow::outflow) continue;
        const int va = mesh.boundary_edges[k][0];
        const int vb = mesh.boundary_edges[k][1];
        const Vec2 pa = mesh.vertices[va], pb = mesh.vertices[vb];
        const Vec2 n = mesh.boundary_normal(k);
        const double h_e = mesh.boundary_length(k);
        for (std::size_t q = 0; q < g4.nodes.size(); ++q) {
            const double s = 0.5 * (1.0 + g4.nodes[q]); // hat at vb
            const Vec2 x = pa + (pb - pa) * s;
            const double w = 0.5 * h_e * g4.weights[q] * dot(coeffs.b(x), n);
            const std::array<std::pair<int, double>, 2> hats = {{{va, 1.0 - s}, {vb, s}}};
            for (const auto& [i, li] : hats)
                for (const auto& [j, lj] : hats) trips.emplace_back(i, j, w * li * lj);
        }
    }
    SparseMat M(mesh.n_vertices(), mesh.n_vertices());
    M.setFromTriplets(trips.begin(), trips.end());
    return M;
}

SparseMat assemble_h1_gram(const PrimalMesh& mesh) {
    CoefficientSet unit;
    unit.A = [](const Vec2&, int) { return Eigen::Matrix2d::Identity().eval(); };
    unit.b = [](const Vec2&) { return Vec2{0.0, 0.0}; };
    unit.c = [](const Vec2&) { return 1.0; };
    BoundaryClassification cls;
    cls.tag.assign(mesh.n_boundary_edges(), EdgeFlow::outflow);
    return assemble_fem_interior(mesh, unit, cls);
}

CoupledSystem assemble_fembem_oracle(const PrimalMesh& mesh, const DualMesh& dual,
                                     const CoefficientSet& coeffs,
                                     const BemMatrices& bem,
                                     const BoundaryClassification& cls) {
    CoupledSystem sys;
    sys.mesh = &mesh;
    sys.dual = &dual;
    sys.n1 = mesh.n_vertices();
    sys.n2 = mesh.n_boundary_edges();
    sys.A = assemble_fem_interior(mesh, coeffs, cls);
    // <phi, v> on the boundary: integral of a hat over an edge is h_E/2,
    // the same entries as the box-tested coupling (edge means coincide).
    sys.Ctb = coupling_block(mesh);
    sys.Kb = 0.5 * bem.Mb - bem.K;
    sys.V = bem.V;
    sys.M_chi = assemble_p1_mass(mesh);
    return sys;
}

LoadAssembler::LoadAssembler(const PrimalMesh& mesh, const DualMesh& dual)
    : mesh_(&mesh), interior_(mesh, dual) {
    const BoundaryGeometry g = BoundaryGeometry::from_mesh(mesh);
    const int n = g.size();
    const int degree = kPolyDegree;
    moments_.assign(degree + 1, Eigen::MatrixXd::Zero(n, n));
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
            const Eigen::VectorXd m = double_layer_moments(g, k, l, degree);
            for (int j = 0; j <= degree; ++j) moments_[j](k, l) = m[j];
        }
    }
    const GaussRule& nodes = gauss_legendre(degree + 1);
    sample_nodes_ = nodes.nodes;
    Eigen::MatrixXd vand(degree + 1, degree + 1);
    for (int r = 0; r <= degree; ++r) {
        double pw = 1.0;
        for (int c = 0; c <= degree; ++c) {
            vand(r, c) = pw;
            pw *= sample_nodes_[r];
        }
    }
    vandermonde_inv_ = vand.inverse();
}

LoadVector LoadAssembler::assemble(const TimeScalarField& f, const TimeScalarField& g1,
                                   const TimeScalarField& g2, double t) const {
    LoadVector load;
    load.interior = interior_.assemble(f, g2, t);

    const PrimalMesh& mesh = *mesh_;
    const int n = mesh.n_boundary_edges();
    const int degree = kPolyDegree;
    // per-edge monomial coefficients of g1 in the [-1,1] edge coordinate
    Eigen::MatrixXd coef(degree + 1, n);
    Eigen::VectorXd samples(degree + 1);
    for (int k = 0; k < n; ++k) {
        const Vec2 a = mesh.vertices[mesh.boundary_edges[k][0]];
        const Vec2 b = mesh.vertices[mesh.boundary_edges[k][1]];
        const Vec2 mid = (a + b) * 0.5, half = (b - a) * 0.5;
        for (int r = 0; r <= degree; ++r) {
            const double v = g1(mid + half * sample_nodes_[r], t);
            if (!std::isfinite(v))
                throw numerical_error("LoadAssembler: non-finite trace jump value");
            samples[r] = v;
        }
        coef.col(k) = vandermonde_inv_ * samples;
    }

    // (1/2) <g1, chi_E> via exact monomial integrals, minus the K moments
    load.boundary = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < n; ++k) {
        const double half_len = 0.5 * mesh.boundary_length(k);
        double mean = 0.0;
        for (int j = 0; j <= degree; j += 2) mean += coef(j, k) * 2.0 / (j + 1);
        load.boundary[k] = 0.5 * half_len * mean;
    }
    for (int j = 0; j <= degree; ++j)
        load.boundary -= moments_[j] * coef.row(j).transpose();
    return load;
}

LoadVector assemble_load(const PrimalMesh& mesh, const DualMesh& dual,
                         const TimeScalarField& f, const TimeScalarField& g1,
                         const TimeScalarField& g2, double t) {
    LoadAssembler assembler(mesh, dual);
    return assembler.assemble(f, g1, g2, t);
}

} // namespace fvmbem

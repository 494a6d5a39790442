#include <doctest.h>

#include <limits>
#include <random>

#include "fvmbem/coupling.hpp"
#include "support/oracles.hpp"

using namespace fvmbem;

namespace {

CoefficientSet constant_coeffs(double a, Vec2 b, double c) {
    CoefficientSet cs;
    cs.A = [a](const Vec2&, int) { return (a * Eigen::Matrix2d::Identity()).eval(); };
    cs.b = [b](const Vec2&) { return b; };
    cs.c = [c](const Vec2&) { return c; };
    cs.div_b = [](const Vec2&) { return 0.0; };
    return cs;
}

} // namespace

TEST_CASE("upwind weight functions") {
    const UpwindScheme full{UpwindType::full};
    CHECK(full.weight(0.0) == 0.5);
    CHECK(full.weight(3.7) == 1.0);
    CHECK(full.weight(-0.2) == 0.0);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(full.weight(inf) == 1.0);
    CHECK(full.weight(-inf) == 0.0);

    const UpwindScheme steer{UpwindType::steerable};
    CHECK(steer.weight(4.0) == doctest::Approx(0.75));
    CHECK(steer.weight(-4.0) == doctest::Approx(0.25));
    CHECK(steer.weight(1.0) == doctest::Approx(0.5));
    CHECK(steer.weight(0.0) == doctest::Approx(0.5));
    CHECK(steer.weight(inf) == 1.0);
    CHECK(steer.weight(-inf) == 0.0);

    // monotone and within [0,1] on samples
    double prev = 0.0;
    for (double t = -50.0; t <= 50.0; t += 0.25) {
        const double w = steer.weight(t);
        CHECK(w >= 0.0);
        CHECK(w <= 1.0);
        CHECK(w >= prev - 1e-15);
        prev = w;
    }

    CHECK_THROWS_AS(UpwindScheme{UpwindType::none}.weight(1.0), config_error);
}

TEST_CASE("box scheme coincides with the Galerkin matrix for pure diffusion") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> uni(0.5, 2.0);
    std::uniform_real_distribution<double> ang(0.0, M_PI);
    const std::array<PrimalMesh, 3> meshes = {
        build_uniform_square_mesh({0.0, 0.0}, 0.5, 0.125),
        refine_uniform(build_uniform_square_mesh({0.0, 0.0}, 0.5, 0.125)),
        build_lshape_mesh(0.125)};
    for (const PrimalMesh& mesh : meshes) {
        const DualMesh dual = build_dual(mesh);
        const BoundaryClassification cls =
            classify_boundary(mesh, [](const Vec2&) { return Vec2{0.0, 0.0}; });

        const CoefficientSet identity = constant_coeffs(1.0, {0.0, 0.0}, 0.0);
        const Eigen::MatrixXd fvm = Eigen::MatrixXd(assemble_fvm(mesh, dual, identity, cls));
        const Eigen::MatrixXd fem =
            Eigen::MatrixXd(assemble_fem_interior(mesh, identity, cls));
        CHECK((fvm - fem).cwiseAbs().maxCoeff() < 1e-12);
        // no flux of constants
        CHECK((fvm * Eigen::VectorXd::Ones(mesh.n_vertices())).cwiseAbs().maxCoeff() < 1e-12);

        // random triangle-wise constant symmetric positive definite diffusion
        std::vector<Eigen::Matrix2d> per_tri(mesh.n_triangles());
        for (auto& A : per_tri) {
            const double phi = ang(rng), d1 = uni(rng), d2 = uni(rng);
            Eigen::Matrix2d R;
            R << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
            A = R * Eigen::Vector2d(d1, d2).asDiagonal() * R.transpose();
        }
        CoefficientSet random_a = identity;
        random_a.A = [&per_tri](const Vec2&, int tri) { return per_tri.at(tri); };
        const Eigen::MatrixXd fvm_r =
            Eigen::MatrixXd(assemble_fvm(mesh, dual, random_a, cls));
        const Eigen::MatrixXd fem_r =
            Eigen::MatrixXd(assemble_fem_interior(mesh, random_a, cls));
        CHECK((fvm_r - fem_r).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("pure reaction with unit coefficient reproduces the chi mass matrix") {
    const PrimalMesh mesh = build_uniform_square_mesh({0.0, 0.0}, 0.5, 0.125);
    const DualMesh dual = build_dual(mesh);
    const BoundaryClassification cls =
        classify_boundary(mesh, [](const Vec2&) { return Vec2{0.0, 0.0}; });
    const CoefficientSet cs = constant_coeffs(0.0, {0.0, 0.0}, 1.0);
    const Eigen::MatrixXd fvm = Eigen::MatrixXd(assemble_fvm(mesh, dual, cs, cls));
    const Eigen::MatrixXd chi = Eigen::MatrixXd(assemble_chi_mass(mesh, dual));
    CHECK((fvm - chi).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("upwind assembly reduces to the plain assembly without convection") {
    const PrimalMesh mesh = refine_uniform(build_lshape_mesh(0.25));
    const DualMesh dual = build_dual(mesh);
    const CoefficientSet cs = constant_coeffs(0.7, {0.0, 0.0}, 2.0);
    const BoundaryClassification cls = classify_boundary(mesh, cs.b);
    const Eigen::MatrixXd plain = Eigen::MatrixXd(assemble_fvm(mesh, dual, cs, cls));
    for (UpwindType type : {UpwindType::full, UpwindType::steerable}) {
        const Eigen::MatrixXd up =
            Eigen::MatrixXd(assemble_fvm_upwind(mesh, dual, cs, cls, UpwindScheme{type}));
        CHECK((up - plain).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("interface averages reproduce constant convection data") {
    const PrimalMesh mesh = build_uniform_square_mesh({-0.25, -0.25}, 0.5, 0.25);
    const DualMesh dual = build_dual(mesh);
    const Vec2 b{1.3, -0.4};
    const CoefficientSet cs = constant_coeffs(2.0, b, 0.0);
    for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
        const InterfaceStats stats = interface_stats(mesh, dual, cs, static_cast<int>(e));
        Vec2 weighted{0.0, 0.0};
        const DualInterface& iface = dual.interfaces[e];
        for (int s = 0; s < iface.n_segments; ++s)
            weighted += iface.segments[s].normal * iface.segments[s].length;
        CHECK(stats.beta ==
              doctest::Approx(dot(b, weighted / stats.length)).epsilon(1e-13));
        CHECK(stats.a_avg(0, 0) == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(stats.a_avg(0, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    }
}

TEST_CASE("full upwinding picks the upstream nodal value") {
    // pure convection: the upwind matrix rebuilt from first principles
    const PrimalMesh mesh = build_uniform_square_mesh({-0.25, -0.25}, 0.5, 0.25);
    const DualMesh dual = build_dual(mesh);
    const Vec2 b{1.0, 0.3};
    CoefficientSet cs = constant_coeffs(0.0, b, 0.0);
    const BoundaryClassification cls = classify_boundary(mesh, cs.b);
    const Eigen::MatrixXd up = Eigen::MatrixXd(
        assemble_fvm_upwind(mesh, dual, cs, cls, UpwindScheme{UpwindType::full}));

    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(mesh.n_vertices(), mesh.n_vertices());
    for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
        const InterfaceStats st = interface_stats(mesh, dual, cs, static_cast<int>(e));
        const DualInterface& iface = dual.interfaces[e];
        const double flux = st.beta * st.length;
        const double lam = st.beta > 0.0 ? 1.0 : (st.beta < 0.0 ? 0.0 : 0.5);
        expected(iface.vi, iface.vi) += flux * lam;
        expected(iface.vi, iface.vj) += flux * (1.0 - lam);
        expected(iface.vj, iface.vi) -= flux * lam;
        expected(iface.vj, iface.vj) -= flux * (1.0 - lam);
    }
    for (int k = 0; k < mesh.n_boundary_edges(); ++k) {
        if (cls.tag[k] != EdgeFlow::outflow) continue;
        const int va = mesh.boundary_edges[k][0];
        const int vb = mesh.boundary_edges[k][1];
        const Vec2 pa = mesh.vertices[va], pb = mesh.vertices[vb];
        const Vec2 m = (pa + pb) * 0.5;
        const Vec2 n = mesh.boundary_normal(k);
        const double h_e = mesh.boundary_length(k);
        for (int half = 0; half < 2; ++half) {
            const Vec2 h0 = half == 0 ? pa : m;
            const Vec2 h1 = half == 0 ? m : pb;
            const int row = half == 0 ? va : vb;
            expected(row, va) += integrate_segment(h0, h1, 6, [&](const Vec2& x) {
                return dot(b, n) * (1.0 - dist(x, pa) / h_e);
            });
            expected(row, vb) += integrate_segment(h0, h1, 6, [&](const Vec2& x) {
                return dot(b, n) * (dist(x, pa) / h_e);
            });
        }
    }
    CHECK((up - expected).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("interior flux contributions cancel between neighboring rows") {
    // velocity supported away from the boundary isolates interior fluxes
    const PrimalMesh mesh = refine_uniform(build_uniform_square_mesh({0.0, 0.0}, 0.5, 0.125));
    const DualMesh dual = build_dual(mesh);
    CoefficientSet cs = constant_coeffs(1.0, {0.0, 0.0}, 0.0);
    cs.b = [](const Vec2& x) {
        const double bump = std::exp(-60.0 * (dot(x - Vec2{0.25, 0.25}, x - Vec2{0.25, 0.25})));
        return Vec2{bump, -0.5 * bump};
    };
    const BoundaryClassification cls = classify_boundary(mesh, cs.b);
    const Eigen::MatrixXd A = Eigen::MatrixXd(assemble_fvm(mesh, dual, cs, cls));
    // with c = 0 and no boundary convection each column sums to zero
    CHECK(A.colwise().sum().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("right-hand side integrates sources over boxes and the boundary") {
    const PrimalMesh mesh = build_uniform_square_mesh({0.0, 0.0}, 0.5, 0.125);
    const DualMesh dual = build_dual(mesh);

    const Eigen::VectorXd ones = assemble_fvm_rhs(
        mesh, dual, [](const Vec2&, double) { return 1.0; },
        [](const Vec2&, double) { return 0.0; }, 0.0);
    for (int i = 0; i < mesh.n_vertices(); ++i)
        CHECK(ones[i] == doctest::Approx(dual.box_area[i]).epsilon(1e-13));

    const Eigen::VectorXd boundary = assemble_fvm_rhs(
        mesh, dual, [](const Vec2&, double) { return 0.0; },
        [](const Vec2&, double) { return 1.0; }, 0.0);
    for (int i = 0; i < mesh.n_vertices(); ++i)
        CHECK(boundary[i] ==
              doctest::Approx(dual.box_boundary_length(i)).epsilon(1e-13).scale(1.0));

    // smooth data against the refinement-based quadrature oracle
    auto f = [](const Vec2& x, double) { return std::exp(x.x + 0.5 * x.y); };
    auto g2 = [](const Vec2& x, double) { return std::exp(-x.x) + x.y; };
    const Eigen::VectorXd load = assemble_fvm_rhs(mesh, dual, f, g2, 0.0);
    for (int i = 0; i < mesh.n_vertices(); ++i) {
        const double oracle = testing::oracle_box_load(mesh, dual, i, f, g2, 0.0);
        CHECK(load[i] == doctest::Approx(oracle).epsilon(1e-8));
    }

    CHECK_THROWS_AS(assemble_fvm_rhs(
                        mesh, dual,
                        [](const Vec2&, double) { return std::numeric_limits<double>::quiet_NaN(); },
                        [](const Vec2&, double) { return 0.0; }, 0.0),
                    numerical_error);
}

TEST_CASE("coefficient validation flags indefinite data without aborting") {
    const PrimalMesh mesh = build_uniform_square_mesh({0.0, 0.0}, 0.5, 0.125);
    CoefficientSet bad = constant_coeffs(-1.0, {0.0, 0.0}, 0.0);
    const auto warnings = validate_coefficients(bad, mesh);
    CHECK(warnings.size() == 2); // indefinite diffusion + parabolicity
    const CoefficientSet good = constant_coeffs(1.0, {0.0, 0.0}, 1.0);
    CHECK(validate_coefficients(good, mesh).empty());
}

#include "fvmbem/problems.hpp"

#include <cmath>
#include <random>

namespace fvmbem {

namespace {

// Outward normal of the square [corner, corner+side]^2 at a boundary point.
Vec2 square_normal(const Vec2& corner, double side, const Vec2& x) {
    const double tol = 1e-10 * side;
    if (std::abs(x.x - corner.x) < tol) return {-1.0, 0.0};
    if (std::abs(x.x - corner.x - side) < tol) return {1.0, 0.0};
    if (std::abs(x.y - corner.y) < tol) return {0.0, -1.0};
    if (std::abs(x.y - corner.y - side) < tol) return {0.0, 1.0};
    throw config_error("square_normal: point not on the boundary");
}

// Outward normal of the L-shape (-1/4,1/4)^2 minus [0,1/4]x[-1/4,0].
Vec2 lshape_normal(const Vec2& x) {
    const double tol = 1e-10;
    if (std::abs(x.x - 0.25) < tol) return {1.0, 0.0};
    if (std::abs(x.x + 0.25) < tol) return {-1.0, 0.0};
    if (std::abs(x.y - 0.25) < tol) return {0.0, 1.0};
    if (std::abs(x.y + 0.25) < tol) return {0.0, -1.0};
    if (std::abs(x.x) < tol && x.y < 0.0) return {1.0, 0.0};
    if (std::abs(x.y) < tol && x.x > 0.0) return {0.0, -1.0};
    throw config_error("lshape_normal: point not on the boundary");
}

// Exterior log field (1-t) log|x - center| with its gradient.
ExactSolution log_exterior(const Vec2& center) {
    ExactSolution e;
    e.u_ext = [center](const Vec2& x, double t) {
        return (1.0 - t) * 0.5 * std::log(dot(x - center, x - center));
    };
    e.grad_u_ext = [center](const Vec2& x, double t) {
        const Vec2 d = x - center;
        return (1.0 - t) / dot(d, d) * d;
    };
    return e;
}

} // namespace

PrimalMesh ProblemSpec::build_mesh(int level, double base_spacing) const {
    if (level < 0) throw config_error("build_mesh: level must be >= 0");
    const double spacing = base_spacing / std::pow(2.0, level);
    if (domain == Domain::square) return build_uniform_square_mesh(corner, side, spacing);
    return build_lshape_mesh(spacing);
}

ProblemSpec problem_tanh_layer() {
    ProblemSpec p;
    p.name = "tanh";
    p.domain = ProblemSpec::Domain::square;
    p.corner = {0.0, 0.0};
    p.side = 0.5;
    p.T = 1.0;
    p.upwind = UpwindType::full;
    p.method = TimeScheme::variant;

    const double width = 0.02;
    const Vec2 ext_center{0.25, 0.25};

    auto alpha = [](const Vec2& x) { return x.y < 0.25 ? 0.42 : 1.0; };
    p.coeffs.A = [alpha](const Vec2& x, int) {
        return (alpha(x) * Eigen::Matrix2d::Identity()).eval();
    };
    p.coeffs.b = [](const Vec2& x) { return Vec2{1000.0 * x.x, 0.0}; };
    p.coeffs.c = [](const Vec2&) { return 5.0; };
    p.coeffs.div_b = [](const Vec2&) { return 1000.0; };

    auto layer = [width](double x1) { return 1.0 - std::tanh((0.25 - x1) / width); };
    auto u = [layer](const Vec2& x, double t) { return 0.5 * (1.0 + t) * layer(x.x); };
    auto ux1 = [width](const Vec2& x, double t) {
        const double sech = 1.0 / std::cosh((0.25 - x.x) / width);
        return 0.5 * (1.0 + t) * sech * sech / width;
    };
    auto ux1x1 = [width](const Vec2& x, double t) {
        const double th = std::tanh((0.25 - x.x) / width);
        const double sech2 = 1.0 - th * th;
        return (1.0 + t) * sech2 * th / (width * width);
    };

    ExactSolution exact = log_exterior(ext_center);
    exact.u = u;
    exact.grad_u = [ux1](const Vec2& x, double t) { return Vec2{ux1(x, t), 0.0}; };
    p.exact = exact;

    p.f = [=](const Vec2& x, double t) {
        const double du_dt = 0.5 * layer(x.x);
        const double diffusion = -alpha(x) * ux1x1(x, t);
        const double convection = 1000.0 * u(x, t) + 1000.0 * x.x * ux1(x, t);
        return du_dt + diffusion + convection + 5.0 * u(x, t);
    };
    p.q = [u](const Vec2& x) { return u(x, 0.0); };

    const Vec2 corner = p.corner;
    const double side = p.side;
    auto b = p.coeffs.b;
    p.g1 = [exact](const Vec2& x, double t) { return exact.u(x, t) - exact.u_ext(x, t); };
    p.g2 = [=](const Vec2& x, double t) {
        const Vec2 n = square_normal(corner, side, x);
        const Vec2 flux = alpha(x) * exact.grad_u(x, t);
        const double bn = dot(b(x), n);
        double value = dot(flux, n) - exact.flux(x, n, t);
        if (bn < 0.0) value -= bn * exact.u(x, t);
        return value;
    };
    return p;
}

ProblemSpec problem_lshape() {
    ProblemSpec p;
    p.name = "lshape";
    p.domain = ProblemSpec::Domain::lshape;
    p.T = 1.0;
    p.upwind = UpwindType::none;
    p.method = TimeScheme::variant;

    p.coeffs.A = [](const Vec2& x, int) {
        Eigen::Matrix2d A;
        A << 10.0 + std::cos(x.x), 160.0 * x.x * x.y, 160.0 * x.x * x.y,
            10.0 + std::sin(x.y);
        return A;
    };
    p.coeffs.b = [](const Vec2&) { return Vec2{0.0, 0.0}; };
    p.coeffs.c = [](const Vec2&) { return 0.0; };
    p.coeffs.div_b = [](const Vec2&) { return 0.0; };

    // corner-singular harmonic function Im(z^(2/3)) with the branch cut in
    // the removed quadrant
    constexpr double lambda = 2.0 / 3.0;
    auto polar_angle = [](const Vec2& x) {
        double th = std::atan2(x.y, x.x);
        if (th < 0.0) th += 2.0 * M_PI;
        return th;
    };
    auto singular = [polar_angle](const Vec2& x, double power) {
        // returns (Re, Im) of z^power on the chosen branch
        const double r2 = dot(x, x);
        if (r2 < 1e-280) return Vec2{0.0, 0.0};
        const double r = std::sqrt(r2);
        const double th = polar_angle(x);
        const double rp = std::pow(r, power);
        return Vec2{rp * std::cos(power * th), rp * std::sin(power * th)};
    };

    auto u = [singular](const Vec2& x, double t) {
        return (1.0 + t * t) * singular(x, lambda).y;
    };
    auto grad_u = [singular](const Vec2& x, double t) {
        const Vec2 w = lambda * singular(x, lambda - 1.0);
        return Vec2{(1.0 + t * t) * w.y, (1.0 + t * t) * w.x};
    };

    ExactSolution exact = log_exterior(Vec2{-0.125, 0.125});
    exact.u = u;
    exact.grad_u = grad_u;
    p.exact = exact;

    auto A = p.coeffs.A;
    p.f = [=](const Vec2& x, double t) {
        const double fac = 1.0 + t * t;
        const Vec2 w1 = lambda * singular(x, lambda - 1.0);
        const Vec2 w2 = lambda * (lambda - 1.0) * singular(x, lambda - 2.0);
        const double ux = fac * w1.y, uy = fac * w1.x;
        const double uxx = fac * w2.y, uxy = fac * w2.x, uyy = -fac * w2.y;
        const Eigen::Matrix2d Am = A(x, -1);
        const double divA_x = -std::sin(x.x) + 160.0 * x.x; // d1 A11 + d2 A12
        const double divA_y = 160.0 * x.y + std::cos(x.y);  // d1 A12 + d2 A22
        const double div_flux = divA_x * ux + divA_y * uy + Am(0, 0) * uxx +
                                2.0 * Am(0, 1) * uxy + Am(1, 1) * uyy;
        return 2.0 * t * singular(x, lambda).y - div_flux;
    };
    p.q = [u](const Vec2& x) { return u(x, 0.0); };
    p.g1 = [exact](const Vec2& x, double t) { return exact.u(x, t) - exact.u_ext(x, t); };
    p.g2 = [=](const Vec2& x, double t) {
        const Vec2 n = lshape_normal(x);
        const Vec2 g = exact.grad_u(x, t);
        const Eigen::Matrix2d Am = A(x, -1);
        const Vec2 flux{Am(0, 0) * g.x + Am(0, 1) * g.y, Am(1, 0) * g.x + Am(1, 1) * g.y};
        return dot(flux, n) - exact.flux(x, n, t);
    };
    return p;
}

ProblemSpec problem_transport(double alpha_threshold) {
    ProblemSpec p;
    p.name = "transport";
    p.domain = ProblemSpec::Domain::square;
    p.corner = {-0.25, -0.25};
    p.side = 0.5;
    p.T = 1.0;
    p.upwind = UpwindType::full;
    p.method = TimeScheme::variant;

    p.coeffs.A = [alpha_threshold](const Vec2& x, int) {
        const double a = x.x < alpha_threshold ? 1e-2 : 1e-3;
        return (a * Eigen::Matrix2d::Identity()).eval();
    };
    p.coeffs.b = [](const Vec2& x) { return Vec2{0.25 - 4.0 * x.y, 4.0 * x.x}; };
    p.coeffs.c = [](const Vec2&) { return 1.0; };
    p.coeffs.div_b = [](const Vec2&) { return 0.0; };

    p.f = [](const Vec2& x, double t) {
        if (-0.2 <= x.x && x.x <= -0.1 && -0.2 <= x.y && x.y <= -0.05 && t < 0.25)
            return 50.0;
        if (-0.2 <= x.x && x.x <= -0.1 && 0.05 <= x.y && x.y <= 0.2 && t < 0.5)
            return 25.0;
        return 0.0;
    };
    p.g1 = [](const Vec2&, double) { return 0.0; };
    p.g2 = [](const Vec2&, double) { return 0.0; };
    p.q = [](const Vec2&) { return 0.0; };
    return p;
}

ProblemSpec make_problem(const std::string& name) {
    if (name == "tanh") return problem_tanh_layer();
    if (name == "lshape") return problem_lshape();
    if (name == "transport") return problem_transport();
    throw config_error("unknown problem '" + name + "' (expected tanh, lshape or transport)");
}

double exact_consistency_error(const ProblemSpec& problem, const PrimalMesh& mesh,
                               int samples_per_edge, unsigned seed) {
    if (!problem.exact) throw config_error("exact_consistency_error: no exact solution");
    const ExactSolution& e = *problem.exact;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    std::uniform_real_distribution<double> time(0.0, problem.T);
    double worst = 0.0;
    for (int k = 0; k < mesh.n_boundary_edges(); ++k) {
        const Vec2 a = mesh.vertices[mesh.boundary_edges[k][0]];
        const Vec2 b = mesh.vertices[mesh.boundary_edges[k][1]];
        const Vec2 n = mesh.boundary_normal(k);
        for (int s = 0; s < samples_per_edge; ++s) {
            const Vec2 x = a + (b - a) * unit(rng);
            const double t = time(rng);
            const double jump1 = e.u(x, t) - e.u_ext(x, t);
            worst = std::max(worst, std::abs(problem.g1(x, t) - jump1));
            const Eigen::Matrix2d Am = problem.coeffs.A(x, -1);
            const Vec2 g = e.grad_u(x, t);
            Vec2 flux{Am(0, 0) * g.x + Am(0, 1) * g.y, Am(1, 0) * g.x + Am(1, 1) * g.y};
            const double bn = dot(problem.coeffs.b(x), n);
            double jump2 = dot(flux, n) - e.flux(x, n, t);
            if (bn < 0.0) jump2 -= bn * e.u(x, t);
            worst = std::max(worst, std::abs(problem.g2(x, t) - jump2));
        }
    }
    return worst;
}

} // namespace fvmbem

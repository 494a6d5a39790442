// Command line front end: convergence studies, field snapshots and built-in
// self tests for the coupled finite volume / boundary element solver.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fvmbem/driver.hpp"
#include "fvmbem/io.hpp"

namespace {

using namespace fvmbem;

struct CliConfig {
    double base_spacing = 0.125;
    double base_tau = 0.05;
    double transport_alpha_threshold = 0.25;
    InterfaceMatrixNorm peclet_norm = InterfaceMatrixNorm::max_entry;
    std::optional<double> horizon;
};

InterfaceMatrixNorm parse_norm(const std::string& name) {
    if (name == "max_entry") return InterfaceMatrixNorm::max_entry;
    if (name == "frobenius") return InterfaceMatrixNorm::frobenius;
    if (name == "row_sum") return InterfaceMatrixNorm::row_sum;
    throw config_error("unknown matrix norm '" + name + "'");
}

CliConfig load_config(const std::string& path) {
    CliConfig cfg;
    if (path.empty()) return cfg;
    for (const auto& [key, value] : parse_config(path)) {
        try {
            if (key == "base_h")
                cfg.base_spacing = std::stod(value);
            else if (key == "base_tau")
                cfg.base_tau = std::stod(value);
            else if (key == "T")
                cfg.horizon = std::stod(value);
            else if (key == "transport_alpha_threshold")
                cfg.transport_alpha_threshold = std::stod(value);
            else if (key == "upwind_matrix_norm")
                cfg.peclet_norm = parse_norm(value);
            else
                throw config_error("unknown config key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw config_error("config key '" + key + "' has a non-numeric value");
        }
    }
    return cfg;
}

ProblemSpec configured_problem(const std::string& name, const CliConfig& cfg) {
    ProblemSpec problem = name == "transport"
                              ? problem_transport(cfg.transport_alpha_threshold)
                              : make_problem(name);
    if (cfg.horizon) problem.T = *cfg.horizon;
    return problem;
}

std::optional<UpwindType> parse_upwind(const std::string& name) {
    if (name.empty()) return std::nullopt;
    if (name == "none") return UpwindType::none;
    if (name == "full") return UpwindType::full;
    if (name == "steerable") return UpwindType::steerable;
    throw config_error("unknown upwind scheme '" + name + "'");
}

std::optional<TimeScheme> parse_method(const std::string& name) {
    if (name.empty()) return std::nullopt;
    if (name == "variant") return TimeScheme::variant;
    if (name == "classical") return TimeScheme::classical;
    throw config_error("unknown method '" + name + "'");
}

int cmd_converge(const std::string& problem_name, int levels, const std::string& method,
                 const std::string& upwind, const std::string& config_path,
                 const std::string& out_path) {
    const CliConfig cfg = load_config(config_path);
    const ProblemSpec problem = configured_problem(problem_name, cfg);
    StudyOptions options;
    options.levels = levels;
    options.base_spacing = cfg.base_spacing;
    options.base_tau = cfg.base_tau;
    options.method = parse_method(method);
    options.upwind = parse_upwind(upwind);
    options.fvm.peclet_norm = cfg.peclet_norm;

    const ConvergenceReport report = run_convergence(problem, options);
    const std::string csv = format_csv(report);
    std::cout << csv;
    if (!out_path.empty()) write_text_file(out_path, csv);
    return 0;
}

int cmd_snapshots(const std::string& problem_name, std::vector<double> times,
                  const std::string& upwind, const std::string& config_path,
                  const std::string& out_prefix) {
    const CliConfig cfg = load_config(config_path);
    const ProblemSpec problem = configured_problem(problem_name, cfg);
    StudyOptions options;
    options.upwind = parse_upwind(upwind);
    options.fvm.peclet_norm = cfg.peclet_norm;
    if (times.empty()) times = {0.0625, 0.125, 0.25, 0.5, 0.75, 1.0};

    const SnapshotResult result =
        run_snapshots(problem, cfg.base_spacing, cfg.base_tau, times, out_prefix, options);
    for (std::size_t i = 0; i < result.files.size(); ++i)
        std::cout << result.files[i] << "  max u = " << result.max_value[i] << " at ("
                  << result.argmax_position[i].x << ", " << result.argmax_position[i].y
                  << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vertex-centered finite volume / boundary element coupling solver"};
    app.require_subcommand(1);

    std::string problem, method, upwind, config_path, out_path = "convergence.csv";
    int levels = 5;
    std::vector<double> times;
    std::string prefix = "snapshot";

    CLI::App* conv = app.add_subcommand("converge", "uniform space-time refinement study");
    conv->add_option("problem", problem, "tanh | lshape")->required();
    conv->add_option("--levels", levels, "number of refinement levels");
    conv->add_option("--method", method, "variant | classical");
    conv->add_option("--upwind", upwind, "none | full | steerable");
    conv->add_option("--config", config_path, "key=value overrides");
    conv->add_option("--out", out_path, "CSV output path");

    CLI::App* snap = app.add_subcommand("snapshots", "write VTK fields at chosen times");
    snap->add_option("problem", problem, "tanh | lshape | transport")->required();
    snap->add_option("--times", times, "snapshot times");
    snap->add_option("--upwind", upwind, "none | full | steerable");
    snap->add_option("--config", config_path, "key=value overrides");
    snap->add_option("--prefix", prefix, "output file prefix");

    CLI::App* self = app.add_subcommand("selftest", "run built-in oracle checks");

    try {
        app.parse(argc, argv);
        if (conv->parsed()) return cmd_converge(problem, levels, method, upwind, config_path, out_path);
        if (snap->parsed()) return cmd_snapshots(problem, times, upwind, config_path, prefix);
        if (self->parsed()) {
            const int failures = fvmbem::run_selftest();
            if (failures > 0) std::cerr << failures << " self test(s) failed\n";
            return failures == 0 ? 0 : 2;
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const fvmbem::config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const fvmbem::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

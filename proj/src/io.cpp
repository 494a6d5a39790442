#include "fvmbem/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace fvmbem {

namespace {

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

void write_vtk(const std::string& path, const PrimalMesh& mesh,
               const Eigen::VectorXd* values) {
    std::ofstream out(path);
    if (!out) throw config_error("write_vtk: cannot open " + path);
    out << "# vtk DataFile Version 3.0\n";
    out << "fvmbem field snapshot\n";
    out << "ASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.n_vertices() << " double\n";
    for (const Vec2& v : mesh.vertices)
        out << fmt12(v.x) << " " << fmt12(v.y) << " 0\n";
    out << "CELLS " << mesh.n_triangles() << " " << 4 * mesh.n_triangles() << "\n";
    for (const auto& t : mesh.triangles)
        out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
    out << "CELL_TYPES " << mesh.n_triangles() << "\n";
    for (int t = 0; t < mesh.n_triangles(); ++t) out << "5\n";
    if (values) {
        out << "POINT_DATA " << mesh.n_vertices() << "\n";
        out << "SCALARS u double 1\n";
        out << "LOOKUP_TABLE default\n";
        for (int i = 0; i < values->size(); ++i) out << fmt12((*values)[i]) << "\n";
    }
    if (!out) throw config_error("write_vtk: write failed for " + path);
}

std::string format_csv(const ConvergenceReport& report) {
    std::ostringstream out;
    out << "level,hinv,err_V,err_H1,err_sum,eoc_V,eoc_H1,eoc_sum\n";
    auto rate = [](double v) { return std::isnan(v) ? std::string() : fmt12(v); };
    for (std::size_t l = 0; l < report.rows.size(); ++l) {
        const auto& r = report.rows[l];
        out << r.level << "," << fmt12(1.0 / r.h) << "," << fmt12(r.err_V) << ","
            << fmt12(r.err_H1) << "," << fmt12(r.err_sum) << "," << rate(report.eoc_V[l])
            << "," << rate(report.eoc_H1[l]) << "," << rate(report.eoc_sum[l]) << "\n";
    }
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw config_error("write_text_file: cannot open " + path);
    out << content;
    if (!out) throw config_error("write_text_file: write failed for " + path);
}

std::map<std::string, std::string> parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("parse_config: cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string stripped = strip(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw config_error("parse_config: line " + std::to_string(lineno) +
                               " is not key=value");
        const std::string key = strip(stripped.substr(0, eq));
        const std::string value = strip(stripped.substr(eq + 1));
        if (key.empty()) throw config_error("parse_config: empty key on line " +
                                            std::to_string(lineno));
        kv[key] = value;
    }
    return kv;
}

} // namespace fvmbem

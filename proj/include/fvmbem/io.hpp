#pragma once

#include <map>
#include <string>

#include "fvmbem/convergence.hpp"

namespace fvmbem {

/// Legacy ASCII VTK unstructured grid (triangle cells); when values are
/// given they are emitted as POINT_DATA scalars named "u".
void write_vtk(const std::string& path, const PrimalMesh& mesh,
               const Eigen::VectorXd* values = nullptr);

/// CSV with header level,hinv,err_V,err_H1,err_sum,eoc_V,eoc_H1,eoc_sum;
/// floats carry 12 significant digits, undefined rates are empty fields.
std::string format_csv(const ConvergenceReport& report);

void write_text_file(const std::string& path, const std::string& content);

/// Plain key=value configuration (one pair per line, '#' comments).
std::map<std::string, std::string> parse_config(const std::string& path);

} // namespace fvmbem

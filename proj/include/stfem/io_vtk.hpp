#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

#include "stfem/mesh.hpp"

namespace stfem {

namespace detail {

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace detail

/// Legacy ASCII VTK export (UNSTRUCTURED_GRID, cell types 5/10) of the
/// mesh plus an optional nodal scalar field. 2d space-time points are
/// written as (x, t, 0).
template <int M>
void write_vtk(const SpaceTimeMesh<M>& mesh, const std::string& path,
               const std::vector<double>* point_scalar = nullptr,
               std::string_view scalar_name = "u_h") {
  if (point_scalar && static_cast<int>(point_scalar->size()) != mesh.n_vertices())
    throw std::invalid_argument("write_vtk: scalar length does not match vertex count");

  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_vtk: cannot open " + path);

  os << "# vtk DataFile Version 3.0\n";
  os << "stfem space-time mesh\n";
  os << "ASCII\n";
  os << "DATASET UNSTRUCTURED_GRID\n";

  os << "POINTS " << mesh.n_vertices() << " double\n";
  for (const auto& v : mesh.vertices) {
    os << detail::format_double(v[0]) << " " << detail::format_double(v[1]) << " "
       << (M == 3 ? detail::format_double(v[2]) : "0") << "\n";
  }

  const int per_cell = M + 1;
  os << "CELLS " << mesh.n_cells() << " " << mesh.n_cells() * (per_cell + 1) << "\n";
  for (const auto& cell : mesh.cells) {
    os << per_cell;
    for (int v = 0; v < per_cell; ++v) os << " " << cell[v];
    os << "\n";
  }

  os << "CELL_TYPES " << mesh.n_cells() << "\n";
  const int vtk_type = (M == 2) ? 5 : 10;  // triangle / tetrahedron
  for (int c = 0; c < mesh.n_cells(); ++c) os << vtk_type << "\n";

  if (point_scalar) {
    os << "POINT_DATA " << mesh.n_vertices() << "\n";
    os << "SCALARS " << scalar_name << " double 1\n";
    os << "LOOKUP_TABLE default\n";
    for (double value : *point_scalar) os << detail::format_double(value) << "\n";
  }

  if (!os) throw std::runtime_error("write_vtk: write failed for " + path);
}

}  // namespace stfem

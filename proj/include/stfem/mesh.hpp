#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "stfem/geometry.hpp"
#include "stfem/types.hpp"

namespace stfem {

enum class NodeClass : std::uint8_t { Constrained, Free };

/// Conforming simplicial mesh of a space-time cylinder in R^M
/// (M = spatial dimension + 1; the last coordinate is time).
/// Immutable after construction; safe to share across threads.
template <int M>
struct SpaceTimeMesh {
  static constexpr int point_dim = M;
  static constexpr int verts_per_cell = M + 1;
  static constexpr int verts_per_facet = M;

  struct BoundaryFacet {
    std::array<int, M> vertices;
    BoundaryTag tag;
  };

  Geometry geometry = Geometry::UnitSquare;
  int subdivisions = 0;  // N: grid intervals per reference edge
  std::vector<Point<M>> vertices;
  std::vector<std::array<int, M + 1>> cells;
  std::vector<BoundaryFacet> boundary_facets;
  std::vector<NodeClass> node_class;  // Constrained on lateral closure or t=0
  double h = 0.0;                     // maximum cell diameter

  int spatial_dim() const { return M - 1; }
  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }

  std::array<Point<M>, M + 1> cell_coords(int cell) const {
    std::array<Point<M>, M + 1> out;
    for (int v = 0; v <= M; ++v) out[v] = vertices[cells[cell][v]];
    return out;
  }
};

/// Constrained iff the vertex lies on the closure of the lateral boundary
/// or on the initial slice; interior and terminal-interior nodes are free.
template <int M>
inline NodeClass classify_node(const SpaceTimeMesh<M>& mesh, int vertex) {
  return mesh.node_class.at(static_cast<std::size_t>(vertex));
}

namespace detail {

template <int M>
inline void finalize_h(SpaceTimeMesh<M>& mesh) {
  double h2 = 0.0;
  for (const auto& cell : mesh.cells) {
    for (int a = 0; a <= M; ++a)
      for (int b = a + 1; b <= M; ++b)
        h2 = std::max(h2, squared_distance<M>(mesh.vertices[cell[a]], mesh.vertices[cell[b]]));
  }
  mesh.h = std::sqrt(h2);
}

}  // namespace detail

/// Structured triangulation of a 2d space-time domain: (N+1)^2 grid
/// vertices, each grid square split along its (+xi, +tau) diagonal.
inline SpaceTimeMesh<2> build_structured_2d(int n, Geometry geometry) {
  if (n < 1) throw std::invalid_argument("build_structured_2d: N must be >= 1");
  if (geometry == Geometry::UnitCube)
    throw std::invalid_argument("build_structured_2d: geometry must have one spatial dimension");

  SpaceTimeMesh<2> mesh;
  mesh.geometry = geometry;
  mesh.subdivisions = n;

  const int np = n + 1;
  auto vid = [np](int i, int j) { return j * np + i; };

  mesh.vertices.resize(static_cast<std::size_t>(np) * np);
  mesh.node_class.assign(mesh.vertices.size(), NodeClass::Free);
  for (int j = 0; j < np; ++j) {
    for (int i = 0; i < np; ++i) {
      const Point<2> ref = {static_cast<double>(i) / n, static_cast<double>(j) / n};
      mesh.vertices[vid(i, j)] = map_reference_point<2>(geometry, ref);
      if (i == 0 || i == n || j == 0) mesh.node_class[vid(i, j)] = NodeClass::Constrained;
    }
  }

  mesh.cells.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      mesh.cells.push_back({a, b, c});
      mesh.cells.push_back({a, c, d});
    }
  }

  for (int i = 0; i < n; ++i)
    mesh.boundary_facets.push_back({{vid(i, 0), vid(i + 1, 0)}, BoundaryTag::Initial});
  for (int i = 0; i < n; ++i)
    mesh.boundary_facets.push_back({{vid(i, n), vid(i + 1, n)}, BoundaryTag::Terminal});
  for (int j = 0; j < n; ++j) {
    mesh.boundary_facets.push_back({{vid(0, j), vid(0, j + 1)}, BoundaryTag::Lateral});
    mesh.boundary_facets.push_back({{vid(n, j), vid(n, j + 1)}, BoundaryTag::Lateral});
  }

  detail::finalize_h(mesh);
  return mesh;
}

/// Structured tetrahedralization of the unit cube (0,1)^2 x (0,1):
/// Kuhn subdivision of each grid cube into 6 tetrahedra sharing the
/// main diagonal, conforming across cubes without extra vertices.
inline SpaceTimeMesh<3> build_structured_3d(int n) {
  if (n < 1) throw std::invalid_argument("build_structured_3d: N must be >= 1");
  if (n > 126) throw std::invalid_argument("build_structured_3d: N > 126 exceeds supported size");

  SpaceTimeMesh<3> mesh;
  mesh.geometry = Geometry::UnitCube;
  mesh.subdivisions = n;

  const int np = n + 1;
  auto vid = [np](int i, int j, int k) { return (k * np + j) * np + i; };

  mesh.vertices.resize(static_cast<std::size_t>(np) * np * np);
  mesh.node_class.assign(mesh.vertices.size(), NodeClass::Free);
  for (int k = 0; k < np; ++k) {
    for (int j = 0; j < np; ++j) {
      for (int i = 0; i < np; ++i) {
        mesh.vertices[vid(i, j, k)] = {static_cast<double>(i) / n, static_cast<double>(j) / n,
                                       static_cast<double>(k) / n};
        if (i == 0 || i == n || j == 0 || j == n || k == 0)
          mesh.node_class[vid(i, j, k)] = NodeClass::Constrained;
      }
    }
  }

  // The 6 axis permutations; odd ones get their last two vertices swapped
  // so every tetrahedron is positively oriented.
  static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                      {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  static constexpr bool odd[6] = {false, true, true, false, false, true};

  mesh.cells.reserve(6 * static_cast<std::size_t>(n) * n * n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        for (int p = 0; p < 6; ++p) {
          int d[3] = {0, 0, 0};
          std::array<int, 4> tet;
          tet[0] = vid(i, j, k);
          for (int step = 0; step < 3; ++step) {
            d[perms[p][step]] = 1;
            tet[step + 1] = vid(i + d[0], j + d[1], k + d[2]);
          }
          if (odd[p]) std::swap(tet[2], tet[3]);
          mesh.cells.push_back(tet);
        }
      }
    }
  }

  // Boundary triangles by facet incidence: faces appearing once.
  std::unordered_map<std::uint64_t, std::array<int, 3>> once;
  once.reserve(mesh.cells.size());
  auto key_of = [](const std::array<int, 3>& f) {
    return (static_cast<std::uint64_t>(f[0]) << 42) | (static_cast<std::uint64_t>(f[1]) << 21) |
           static_cast<std::uint64_t>(f[2]);
  };
  for (const auto& tet : mesh.cells) {
    for (int skip = 0; skip < 4; ++skip) {
      std::array<int, 3> face;
      int w = 0;
      for (int v = 0; v < 4; ++v)
        if (v != skip) face[w++] = tet[v];
      std::sort(face.begin(), face.end());
      const auto key = key_of(face);
      auto [it, inserted] = once.try_emplace(key, face);
      if (!inserted) once.erase(it);
    }
  }

  std::vector<std::array<int, 3>> faces;
  faces.reserve(once.size());
  for (const auto& [key, face] : once) faces.push_back(face);
  std::sort(faces.begin(), faces.end());  // deterministic facet order

  auto k_index = [np](int v) { return v / (np * np); };
  for (const auto& face : faces) {
    BoundaryTag tag = BoundaryTag::Lateral;
    if (k_index(face[0]) == 0 && k_index(face[1]) == 0 && k_index(face[2]) == 0)
      tag = BoundaryTag::Initial;
    else if (k_index(face[0]) == n && k_index(face[1]) == n && k_index(face[2]) == n)
      tag = BoundaryTag::Terminal;
    mesh.boundary_facets.push_back({face, tag});
  }

  detail::finalize_h(mesh);
  return mesh;
}

}  // namespace stfem

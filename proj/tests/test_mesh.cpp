#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "stfem/element.hpp"
#include "stfem/mesh.hpp"

using stfem::BoundaryTag;
using stfem::Geometry;
using stfem::NodeClass;
using stfem::Point;
using stfem::SpaceTimeMesh;
using stfem::build_structured_2d;
using stfem::build_structured_3d;
using stfem::classify_node;

namespace {

template <int M>
int count_tag(const SpaceTimeMesh<M>& mesh, BoundaryTag tag) {
  int count = 0;
  for (const auto& f : mesh.boundary_facets)
    if (f.tag == tag) ++count;
  return count;
}

template <int M>
double total_volume(const SpaceTimeMesh<M>& mesh) {
  double vol = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c)
    vol += stfem::cell_map<M>(mesh.cell_coords(c)).abs_det / (M == 2 ? 2.0 : 6.0);
  return vol;
}

template <int M>
double max_diameter(const SpaceTimeMesh<M>& mesh) {
  double h2 = 0.0;
  for (const auto& cell : mesh.cells)
    for (int a = 0; a <= M; ++a)
      for (int b = a + 1; b <= M; ++b)
        h2 = std::max(h2, stfem::squared_distance<M>(mesh.vertices[cell[a]],
                                                     mesh.vertices[cell[b]]));
  return std::sqrt(h2);
}

// Independent conformity oracle: count facet incidences over all cells
// and compare the once-only set against the mesh's boundary facets.
template <int M>
void check_conformity(const SpaceTimeMesh<M>& mesh) {
  std::map<std::array<int, M>, int> counts;
  for (const auto& cell : mesh.cells) {
    for (int skip = 0; skip <= M; ++skip) {
      std::array<int, M> facet;
      int w = 0;
      for (int v = 0; v <= M; ++v)
        if (v != skip) facet[w++] = cell[v];
      std::sort(facet.begin(), facet.end());
      counts[facet]++;
    }
  }
  std::map<std::array<int, M>, int> boundary_seen;
  for (const auto& f : mesh.boundary_facets) {
    std::array<int, M> key = f.vertices;
    std::sort(key.begin(), key.end());
    boundary_seen[key]++;
  }

  int boundary_count = 0;
  for (const auto& [facet, count] : counts) {
    REQUIRE((count == 1 || count == 2));
    if (count == 1) {
      ++boundary_count;
      INFO("boundary facet missing from mesh.boundary_facets");
      REQUIRE(boundary_seen.count(facet) == 1);
      REQUIRE(boundary_seen[facet] == 1);
    } else {
      REQUIRE(boundary_seen.count(facet) == 0);
    }
  }
  REQUIRE(boundary_count == static_cast<int>(mesh.boundary_facets.size()));
}

// Geometric predicate for each tag, 1e-12 absolute.
template <int M>
void check_tag_predicates(const SpaceTimeMesh<M>& mesh) {
  constexpr double tol = 1e-12;
  for (const auto& facet : mesh.boundary_facets) {
    for (int v = 0; v < M; ++v) {
      const auto& p = mesh.vertices[facet.vertices[v]];
      const double t = p[M - 1];
      switch (facet.tag) {
        case BoundaryTag::Initial:
          CHECK(std::abs(t) <= tol);
          break;
        case BoundaryTag::Terminal:
          CHECK(std::abs(t - 1.0) <= tol);
          break;
        case BoundaryTag::Lateral:
          if (mesh.geometry == Geometry::Trapezoid) {
            CHECK((std::abs(p[0] + t) <= tol || std::abs(p[0] - 0.5 - t) <= tol));
          } else {
            bool on_side = false;
            for (int k = 0; k < M - 1; ++k)
              on_side |= std::abs(p[k]) <= tol || std::abs(p[k] - 1.0) <= tol;
            CHECK(on_side);
          }
          break;
      }
    }
  }
}

}  // namespace

TEST_CASE("unit square counts") {
  const auto coarse = build_structured_2d(1, Geometry::UnitSquare);
  CHECK(coarse.n_vertices() == 4);
  CHECK(coarse.n_cells() == 2);
  CHECK(coarse.boundary_facets.size() == 4);
  CHECK(count_tag<2>(coarse, BoundaryTag::Initial) == 1);
  CHECK(count_tag<2>(coarse, BoundaryTag::Terminal) == 1);
  CHECK(count_tag<2>(coarse, BoundaryTag::Lateral) == 2);

  const auto fine = build_structured_2d(4, Geometry::UnitSquare);
  CHECK(fine.n_vertices() == 25);
  CHECK(fine.n_cells() == 32);
}

TEST_CASE("unit cube counts and volume") {
  const auto coarse = build_structured_3d(1);
  CHECK(coarse.n_vertices() == 8);
  CHECK(coarse.n_cells() == 6);

  const auto fine = build_structured_3d(2);
  CHECK(fine.n_vertices() == 27);
  CHECK(fine.n_cells() == 48);
  CHECK(total_volume<3>(fine) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("trapezoid vertex mapping") {
  const auto mesh = build_structured_2d(2, Geometry::Trapezoid);
  // reference (xi, tau) = (1, 0.5) is grid node (i, j) = (2, 1)
  const auto& p = mesh.vertices[1 * 3 + 2];
  CHECK(p[0] == Catch::Approx(1.0));
  CHECK(p[1] == Catch::Approx(0.5));
}

TEST_CASE("domain volumes") {
  for (int n : {1, 2, 4, 8}) {
    CHECK(total_volume<2>(build_structured_2d(n, Geometry::UnitSquare)) ==
          Catch::Approx(1.0).epsilon(1e-12));
    CHECK(total_volume<2>(build_structured_2d(n, Geometry::Trapezoid)) ==
          Catch::Approx(1.5).epsilon(1e-12));
  }
  for (int n : {1, 2, 4}) {
    CHECK(total_volume<3>(build_structured_3d(n)) == Catch::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("cells are positively oriented") {
  for (int n : {1, 3}) {
    for (auto geometry : {Geometry::UnitSquare, Geometry::Trapezoid}) {
      const auto mesh = build_structured_2d(n, geometry);
      for (int c = 0; c < mesh.n_cells(); ++c)
        CHECK(stfem::cell_map<2>(mesh.cell_coords(c)).det > 0.0);
    }
    const auto cube = build_structured_3d(n);
    for (int c = 0; c < cube.n_cells(); ++c)
      CHECK(stfem::cell_map<3>(cube.cell_coords(c)).det > 0.0);
  }
}

TEST_CASE("conformity for N in {1,2,4,8}") {
  for (int n : {1, 2, 4, 8}) {
    check_conformity<2>(build_structured_2d(n, Geometry::UnitSquare));
    check_conformity<2>(build_structured_2d(n, Geometry::Trapezoid));
  }
  for (int n : {1, 2, 4, 8}) check_conformity<3>(build_structured_3d(n));
}

TEST_CASE("boundary tags satisfy their geometric predicates") {
  check_tag_predicates<2>(build_structured_2d(4, Geometry::UnitSquare));
  check_tag_predicates<2>(build_structured_2d(4, Geometry::Trapezoid));
  check_tag_predicates<3>(build_structured_3d(3));
}

TEST_CASE("node classification on the unit square") {
  const auto mesh = build_structured_2d(2, Geometry::UnitSquare);
  auto find = [&mesh](double x, double t) {
    for (int v = 0; v < mesh.n_vertices(); ++v)
      if (std::abs(mesh.vertices[v][0] - x) < 1e-12 && std::abs(mesh.vertices[v][1] - t) < 1e-12)
        return v;
    FAIL("vertex not found");
    return -1;
  };
  CHECK(classify_node(mesh, find(0.5, 0.0)) == NodeClass::Constrained);  // initial slice
  CHECK(classify_node(mesh, find(0.5, 1.0)) == NodeClass::Free);         // terminal interior
  CHECK(classify_node(mesh, find(1.0, 1.0)) == NodeClass::Constrained);  // lateral closure
  CHECK(classify_node(mesh, find(0.5, 0.5)) == NodeClass::Free);         // interior
}

TEST_CASE("mesh size h") {
  for (int n : {1, 2, 4, 8}) {
    const auto square = build_structured_2d(n, Geometry::UnitSquare);
    CHECK(square.h == Catch::Approx(std::sqrt(2.0) / n).epsilon(1e-14));
    CHECK(square.h == Catch::Approx(max_diameter<2>(square)).epsilon(1e-14));
  }
  for (int n : {1, 2, 4}) {
    const auto cube = build_structured_3d(n);
    CHECK(cube.h == Catch::Approx(std::sqrt(3.0) / n).epsilon(1e-14));
  }
  // Exact halving under N -> 2N for the affinely meshed geometries.
  for (int n : {1, 2, 4}) {
    const auto coarse = build_structured_2d(n, Geometry::UnitSquare);
    const auto fine = build_structured_2d(2 * n, Geometry::UnitSquare);
    CHECK(std::abs(fine.h / coarse.h - 0.5) <= 1e-12);
  }
  {
    const auto coarse = build_structured_3d(2);
    const auto fine = build_structured_3d(4);
    CHECK(std::abs(fine.h / coarse.h - 0.5) <= 1e-12);
  }
  // The trapezoid's bilinear vertex map stretches cells near t = 1, so
  // its geometric diameter only halves asymptotically; the table
  // parameter 1/N is what refines exactly.
  const auto trap_coarse = build_structured_2d(4, Geometry::Trapezoid);
  const auto trap_fine = build_structured_2d(8, Geometry::Trapezoid);
  CHECK(trap_fine.h < trap_coarse.h);
  CHECK(trap_fine.h / trap_coarse.h == Catch::Approx(0.5).margin(0.06));
  CHECK(trap_coarse.h == Catch::Approx(max_diameter<2>(trap_coarse)).epsilon(1e-14));
}

TEST_CASE("invalid mesh arguments are rejected") {
  CHECK_THROWS_AS(build_structured_2d(0, Geometry::UnitSquare), std::invalid_argument);
  CHECK_THROWS_AS(build_structured_3d(0), std::invalid_argument);
  CHECK_THROWS_AS(build_structured_2d(2, Geometry::UnitCube), std::invalid_argument);
}

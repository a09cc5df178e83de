#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "stfem/element.hpp"
#include "support/oracles.hpp"

using stfem::CellMap;
using stfem::DegenerateCellError;
using stfem::Point;
using stfem::cell_map;
using stfem::eval_p1;

TEST_CASE("P1 basis on the reference triangle") {
  const auto centroid = eval_p1<2>({1.0 / 3.0, 1.0 / 3.0});
  for (int i = 0; i < 3; ++i) CHECK(centroid.values[i] == Catch::Approx(1.0 / 3.0));

  const auto vertex = eval_p1<2>({1.0, 0.0});
  CHECK(vertex.values[0] == Catch::Approx(0.0).margin(1e-15));
  CHECK(vertex.values[1] == Catch::Approx(1.0));
  CHECK(vertex.values[2] == Catch::Approx(0.0).margin(1e-15));

  const auto any = eval_p1<2>({0.3, 0.2});
  CHECK(any.gradients[0][0] == -1.0);
  CHECK(any.gradients[0][1] == -1.0);
  CHECK(any.gradients[1][0] == 1.0);
  CHECK(any.gradients[1][1] == 0.0);
  CHECK(any.gradients[2][0] == 0.0);
  CHECK(any.gradients[2][1] == 1.0);
}

TEST_CASE("partition of unity and zero gradient sum at random points") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unif(-0.5, 1.5);
  for (int trial = 0; trial < 100; ++trial) {
    {
      const auto basis = eval_p1<2>({unif(rng), unif(rng)});
      double vsum = 0.0, gx = 0.0, gy = 0.0;
      for (int i = 0; i < 3; ++i) {
        vsum += basis.values[i];
        gx += basis.gradients[i][0];
        gy += basis.gradients[i][1];
      }
      CHECK(std::abs(vsum - 1.0) <= 1e-14);
      CHECK(std::abs(gx) <= 1e-14);
      CHECK(std::abs(gy) <= 1e-14);
    }
    {
      const auto basis = eval_p1<3>({unif(rng), unif(rng), unif(rng)});
      double vsum = 0.0;
      Point<3> gsum{};
      for (int i = 0; i < 4; ++i) {
        vsum += basis.values[i];
        for (int k = 0; k < 3; ++k) gsum[k] += basis.gradients[i][k];
      }
      CHECK(std::abs(vsum - 1.0) <= 1e-14);
      for (int k = 0; k < 3; ++k) CHECK(std::abs(gsum[k]) <= 1e-14);
    }
  }
}

TEST_CASE("Lagrange property at reference vertices") {
  std::array<Point<3>, 4> ref_verts = {Point<3>{0, 0, 0}, Point<3>{1, 0, 0}, Point<3>{0, 1, 0},
                                       Point<3>{0, 0, 1}};
  for (int j = 0; j < 4; ++j) {
    const auto basis = eval_p1<3>(ref_verts[j]);
    for (int i = 0; i < 4; ++i) CHECK(basis.values[i] == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-15));
  }
}

TEST_CASE("cell_map on reference and scaled triangles") {
  const std::array<Point<2>, 3> reference = {Point<2>{0, 0}, Point<2>{1, 0}, Point<2>{0, 1}};
  const auto ident = cell_map<2>(reference);
  CHECK(ident.det == Catch::Approx(1.0));
  CHECK(ident.jacobian[0][0] == 1.0);
  CHECK(ident.jacobian[1][1] == 1.0);
  CHECK(ident.jacobian[0][1] == 0.0);

  const std::array<Point<2>, 3> scaled = {Point<2>{0, 0}, Point<2>{2, 0}, Point<2>{0, 2}};
  const auto big = cell_map<2>(scaled);
  CHECK(big.abs_det == Catch::Approx(4.0));  // volume 2

  const std::array<Point<2>, 3> sheared = {Point<2>{0, 0}, Point<2>{1, 0}, Point<2>{1, 1}};
  CHECK(cell_map<2>(sheared).abs_det == Catch::Approx(1.0));
}

TEST_CASE("cell_map maps reference vertices onto cell vertices") {
  std::mt19937 rng(11);
  const auto verts = oracles::random_simplex<3>(rng);
  const auto map = cell_map<3>(verts);
  const std::array<Point<3>, 4> ref_verts = {Point<3>{0, 0, 0}, Point<3>{1, 0, 0},
                                             Point<3>{0, 1, 0}, Point<3>{0, 0, 1}};
  for (int v = 0; v < 4; ++v) {
    const auto mapped = map.to_physical(ref_verts[v]);
    for (int k = 0; k < 3; ++k) CHECK(mapped[k] == Catch::Approx(verts[v][k]).margin(1e-14));
  }
}

TEST_CASE("degenerate cells are rejected") {
  const std::array<Point<2>, 3> flat = {Point<2>{0, 0}, Point<2>{1, 1}, Point<2>{2, 2}};
  CHECK_THROWS_AS(cell_map<2>(flat), DegenerateCellError);
}

namespace {

template <int M>
void check_affine_pushforward(std::mt19937& rng) {
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto verts = oracles::random_simplex<M>(rng);
    const auto map = cell_map<M>(verts);
    Point<M> coeff;
    for (int k = 0; k < M; ++k) coeff[k] = unif(rng);
    const double offset = unif(rng);

    // Nodal values of l(x) = coeff . x + offset; the discrete gradient
    // sum_i l(v_i) J^{-T} grad_ref phi_i must reproduce coeff.
    const auto basis = eval_p1<M>(Point<M>{});
    Point<M> grad{};
    for (int i = 0; i <= M; ++i) {
      const double value = stfem::dot<M>(coeff, verts[i]) + offset;
      const auto g = map.push_gradient(basis.gradients[i]);
      for (int k = 0; k < M; ++k) grad[k] += value * g[k];
    }
    for (int k = 0; k < M; ++k) CHECK(std::abs(grad[k] - coeff[k]) <= 1e-13 * std::max(1.0, std::abs(coeff[k])));
  }
}

}  // namespace

TEST_CASE("pushforward reproduces affine gradients") {
  std::mt19937 rng(13);
  check_affine_pushforward<2>(rng);
  check_affine_pushforward<3>(rng);
}

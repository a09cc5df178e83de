#pragma once

#include <cmath>
#include <cstdlib>

#include "stfem/errors.hpp"
#include "stfem/types.hpp"

namespace stfem {

/// Values and reference gradients of the M+1 linear Lagrange basis
/// functions on the unit reference simplex.
template <int M>
struct P1Values {
  std::array<double, M + 1> values;
  std::array<Point<M>, M + 1> gradients;  // constant in the reference point
};

/// P1 basis on the reference simplex: phi_0 = 1 - sum(p), phi_i = p_{i-1}.
/// Evaluation outside the closed simplex is permitted; the partition of
/// unity and the zero gradient sum hold algebraically everywhere.
template <int M>
inline P1Values<M> eval_p1(const Point<M>& p) {
  P1Values<M> out{};
  double rest = 1.0;
  for (int i = 0; i < M; ++i) {
    rest -= p[i];
    out.values[i + 1] = p[i];
    out.gradients[0][i] = -1.0;
    out.gradients[i + 1][i] = 1.0;
  }
  out.values[0] = rest;
  return out;
}

/// Affine map from the reference simplex onto a physical cell.
/// The Jacobian is constant; physical gradients of P1 functions are
/// J^{-T} times their reference gradients.
template <int M>
struct CellMap {
  Point<M> origin;                 // image of the reference origin
  SmallMatrix<M, M> jacobian;      // column j = v_{j+1} - v_0
  SmallMatrix<M, M> inv_transpose; // J^{-T}
  double det = 0.0;                // signed
  double abs_det = 0.0;            // = M! * cell volume

  Point<M> to_physical(const Point<M>& ref) const {
    Point<M> x = origin;
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j) x[i] += jacobian[i][j] * ref[j];
    return x;
  }

  Point<M> push_gradient(const Point<M>& ref_grad) const {
    Point<M> g{};
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j) g[i] += inv_transpose[i][j] * ref_grad[j];
    return g;
  }
};

template <int M>
CellMap<M> cell_map(const std::array<Point<M>, M + 1>& verts) {
  static_assert(M == 2 || M == 3, "cell_map: simplices in 2 or 3 space-time dimensions");
  CellMap<M> map;
  map.origin = verts[0];
  for (int j = 0; j < M; ++j)
    for (int i = 0; i < M; ++i) map.jacobian[i][j] = verts[j + 1][i] - verts[0][i];

  const auto& a = map.jacobian;
  SmallMatrix<M, M> adj;  // adjugate, so that inv = adj / det
  if constexpr (M == 2) {
    map.det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    adj[0][0] = a[1][1];
    adj[0][1] = -a[0][1];
    adj[1][0] = -a[1][0];
    adj[1][1] = a[0][0];
  } else {
    adj[0][0] = a[1][1] * a[2][2] - a[1][2] * a[2][1];
    adj[0][1] = a[0][2] * a[2][1] - a[0][1] * a[2][2];
    adj[0][2] = a[0][1] * a[1][2] - a[0][2] * a[1][1];
    adj[1][0] = a[1][2] * a[2][0] - a[1][0] * a[2][2];
    adj[1][1] = a[0][0] * a[2][2] - a[0][2] * a[2][0];
    adj[1][2] = a[0][2] * a[1][0] - a[0][0] * a[1][2];
    adj[2][0] = a[1][0] * a[2][1] - a[1][1] * a[2][0];
    adj[2][1] = a[0][1] * a[2][0] - a[0][0] * a[2][1];
    adj[2][2] = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    map.det = a[0][0] * adj[0][0] + a[0][1] * adj[1][0] + a[0][2] * adj[2][0];
  }
  map.abs_det = std::abs(map.det);
  if (map.abs_det < 1e-14)
    throw DegenerateCellError("cell_map: |det| = " + std::to_string(map.abs_det));

  // inverse = adj / det; store the transpose for gradient pushforward
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) map.inv_transpose[i][j] = adj[j][i] / map.det;
  return map;
}

}  // namespace stfem

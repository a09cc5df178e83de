#pragma once

#include <functional>

#include "stfem/types.hpp"

namespace stfem {

/// Symmetric, uniformly positive definite diffusion coefficient A(x, t),
/// acting on spatial gradients only (d x d with d = M-1). Assembly takes
/// a fast path when `is_identity` is set.
template <int M>
struct CoefficientField {
  static constexpr int d = M - 1;
  using Matrix = SmallMatrix<d, d>;

  std::function<Matrix(const Point<M>&)> eval;
  bool is_identity = false;

  static CoefficientField identity() {
    CoefficientField field;
    field.is_identity = true;
    field.eval = [](const Point<M>&) {
      Matrix a{};
      for (int i = 0; i < d; ++i) a[i][i] = 1.0;
      return a;
    };
    return field;
  }

  /// A * g for a spatial vector g.
  std::array<double, d> apply(const Point<M>& p, const std::array<double, d>& g) const {
    if (is_identity) return g;
    const Matrix a = eval(p);
    std::array<double, d> out{};
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out[i] += a[i][j] * g[j];
    return out;
  }
};

}  // namespace stfem

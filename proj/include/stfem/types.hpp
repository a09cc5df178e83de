#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace stfem {

/// Space-time point in R^M. The last coordinate is always time.
template <int M>
using Point = std::array<double, M>;

/// Small dense matrix used for Jacobians and local element matrices.
template <int Rows, int Cols>
using SmallMatrix = std::array<std::array<double, Cols>, Rows>;

template <int M>
inline double dot(const Point<M>& a, const Point<M>& b) {
  double s = 0.0;
  for (int i = 0; i < M; ++i) s += a[i] * b[i];
  return s;
}

template <int M>
inline double squared_distance(const Point<M>& a, const Point<M>& b) {
  double s = 0.0;
  for (int i = 0; i < M; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

template <int M>
inline double distance(const Point<M>& a, const Point<M>& b) {
  return std::sqrt(squared_distance<M>(a, b));
}

}  // namespace stfem

#pragma once

// Independent reference computations for the test suite. Everything here
// deliberately avoids the library's own linear algebra and element
// machinery so that agreement is meaningful.

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "stfem/quadrature.hpp"
#include "stfem/types.hpp"

namespace oracles {

/// Closed-form monomial integral over the reference triangle:
/// int x^a y^b = a! b! / (a+b+2)!.
inline double triangle_monomial(int a, int b) {
  auto fact = [](int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  return fact(a) * fact(b) / fact(a + b + 2);
}

/// int over the reference tetrahedron x^a y^b z^c = a! b! c! / (a+b+c+3)!.
inline double tet_monomial(int a, int b, int c) {
  auto fact = [](int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  return fact(a) * fact(b) * fact(c) / fact(a + b + c + 3);
}

/// int over [0,1] of x^a.
inline double interval_monomial(int a) { return 1.0 / (a + 1); }

/// Dense Gaussian elimination with partial pivoting. Returns the solution
/// and (optionally) the determinant via the pivot product.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b,
                                       double* det_out = nullptr) {
  const int n = static_cast<int>(b.size());
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      std::swap(b[pivot], b[col]);
      det = -det;
    }
    if (a[col][col] == 0.0) throw std::runtime_error("dense_solve: singular matrix");
    det *= a[col][col];
    for (int r = col + 1; r < n; ++r) {
      const double factor = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  if (det_out) *det_out = det;
  return x;
}

/// Barycentric representation of P1 on a simplex, recovered through the
/// dense oracle: lambda_i(x) = row i of A^{-1} applied to (1, x)^T with
/// A = [[1..1],[v_0..v_M]]. Row i is obtained by solving A^T y = e_i.
template <int M>
struct BarycentricBasis {
  std::array<std::array<double, M + 1>, M + 1> coeffs;  // [i]: (const, grad...)
  double abs_det_edges;  // |det| of the edge matrix (v_i - v_0)

  explicit BarycentricBasis(const std::array<stfem::Point<M>, M + 1>& verts) {
    std::vector<std::vector<double>> at(M + 1, std::vector<double>(M + 1));
    for (int j = 0; j <= M; ++j) {
      at[j][0] = 1.0;
      for (int k = 0; k < M; ++k) at[j][k + 1] = verts[j][k];
    }
    double det = 0.0;
    for (int i = 0; i <= M; ++i) {
      std::vector<double> e(M + 1, 0.0);
      e[i] = 1.0;
      const auto y = dense_solve(at, e, &det);
      for (int k = 0; k <= M; ++k) coeffs[i][k] = y[k];
    }
    abs_det_edges = std::abs(det);  // det [[1..1],[v..]] = det of edge matrix
  }

  double value(int i, const stfem::Point<M>& x) const {
    double s = coeffs[i][0];
    for (int k = 0; k < M; ++k) s += coeffs[i][k + 1] * x[k];
    return s;
  }

  std::array<double, M> gradient(int i) const {
    std::array<double, M> g;
    for (int k = 0; k < M; ++k) g[k] = coeffs[i][k + 1];
    return g;
  }
};

/// Brute-force element matrix of the space-time form with A = identity:
/// entry (i,j) = int_K (dt phi_j) phi_i + grad_x phi_j . grad_x phi_i,
/// evaluated with a degree-4 rule and the barycentric oracle basis.
template <int M>
stfem::SmallMatrix<M + 1, M + 1> brute_force_local_matrix(
    const std::array<stfem::Point<M>, M + 1>& verts) {
  const BarycentricBasis<M> basis(verts);
  const auto quad = stfem::quadrature<M>(4);
  stfem::SmallMatrix<M + 1, M + 1> out{};
  for (std::size_t q = 0; q < quad.size(); ++q) {
    stfem::Point<M> x = verts[0];
    for (int j = 0; j < M; ++j)
      for (int k = 0; k < M; ++k) x[k] += quad.points[q][j] * (verts[j + 1][k] - verts[0][k]);
    const double w = quad.weights[q] * basis.abs_det_edges;
    for (int i = 0; i <= M; ++i) {
      for (int j = 0; j <= M; ++j) {
        const auto gi = basis.gradient(i);
        const auto gj = basis.gradient(j);
        double stiff = 0.0;
        for (int k = 0; k < M - 1; ++k) stiff += gi[k] * gj[k];
        out[i][j] += w * (gj[M - 1] * basis.value(i, x) + stiff);
      }
    }
  }
  return out;
}

template <int M>
std::array<stfem::Point<M>, M + 1> random_simplex(std::mt19937& rng, double min_det = 0.05) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (;;) {
    std::array<stfem::Point<M>, M + 1> verts;
    for (auto& v : verts)
      for (int k = 0; k < M; ++k) v[k] = unif(rng);
    BarycentricBasis<M> basis(verts);
    if (basis.abs_det_edges > min_det) return verts;
  }
}

}  // namespace oracles

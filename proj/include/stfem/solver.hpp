#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "stfem/errors.hpp"
#include "stfem/sparse.hpp"

namespace stfem {

enum class SolverMethod { DirectLU, GMRES };
enum class Preconditioner { None, ILU0 };

struct SolverConfig {
  SolverMethod method = SolverMethod::DirectLU;
  double rel_tol = 1e-10;
  int max_iterations = 20000;
  int restart = 50;  // GMRES only
  Preconditioner preconditioner = Preconditioner::ILU0;

  void validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1.0))
      throw std::invalid_argument("SolverConfig: rel_tol must lie in (0,1)");
    if (restart < 1) throw std::invalid_argument("SolverConfig: restart must be >= 1");
    if (max_iterations < 1)
      throw std::invalid_argument("SolverConfig: max_iterations must be >= 1");
  }
};

namespace detail {

inline Eigen::SparseMatrix<double> to_eigen(const CsrMatrix& a) {
  using RowMajor = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
  Eigen::Map<const RowMajor> view(a.rows, a.cols, static_cast<int>(a.nnz()), a.row_offsets.data(),
                                  a.col_indices.data(), a.values.data());
  return Eigen::SparseMatrix<double>(view);
}

/// Zero-fill ILU factorization in the matrix's own sparsity pattern.
class Ilu0 {
 public:
  explicit Ilu0(const CsrMatrix& a)
      : n_(a.rows), row_offsets_(a.row_offsets), col_indices_(a.col_indices), values_(a.values),
        diag_(a.rows, -1) {
    std::vector<int> position(n_, -1);
    for (int i = 0; i < n_; ++i) {
      for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) position[col_indices_[k]] = k;

      for (int kk = row_offsets_[i]; kk < row_offsets_[i + 1]; ++kk) {
        const int k = col_indices_[kk];
        if (k >= i) break;  // columns sorted: strictly lower part first
        values_[kk] /= values_[diag_[k]];
        const double l_ik = values_[kk];
        for (int jj = diag_[k] + 1; jj < row_offsets_[k + 1]; ++jj) {
          const int p = position[col_indices_[jj]];
          if (p >= 0) values_[p] -= l_ik * values_[jj];
        }
      }

      const int dpos = position[i];
      if (dpos < 0 || values_[dpos] == 0.0)
        throw SingularMatrixError("ILU0: zero pivot at row " + std::to_string(i));
      diag_[i] = dpos;

      for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) position[col_indices_[k]] = -1;
    }
  }

  /// z = U^{-1} L^{-1} r
  void apply(const std::vector<double>& r, std::vector<double>& z) const {
    z = r;
    for (int i = 0; i < n_; ++i) {
      double s = z[i];
      for (int k = row_offsets_[i]; k < diag_[i]; ++k) s -= values_[k] * z[col_indices_[k]];
      z[i] = s;
    }
    for (int i = n_ - 1; i >= 0; --i) {
      double s = z[i];
      for (int k = diag_[i] + 1; k < row_offsets_[i + 1]; ++k) s -= values_[k] * z[col_indices_[k]];
      z[i] = s / values_[diag_[i]];
    }
  }

 private:
  int n_;
  std::vector<int> row_offsets_;
  std::vector<int> col_indices_;
  std::vector<double> values_;
  std::vector<int> diag_;
};

/// Right-preconditioned restarted GMRES. The residual it drives down is
/// the true residual of the original system, so the convergence check is
/// preconditioner-independent.
inline std::vector<double> solve_gmres(const CsrMatrix& a, const std::vector<double>& b,
                                       const SolverConfig& config) {
  const int n = a.rows;
  const double b_norm = norm2(b);
  std::vector<double> x(n, 0.0);
  if (b_norm == 0.0) return x;

  std::unique_ptr<Ilu0> precond;
  if (config.preconditioner == Preconditioner::ILU0) precond = std::make_unique<Ilu0>(a);
  auto apply_precond = [&](const std::vector<double>& r, std::vector<double>& z) {
    if (precond)
      precond->apply(r, z);
    else
      z = r;
  };

  const int m = config.restart;
  std::vector<std::vector<double>> v(m + 1);
  std::vector<std::vector<double>> hess(m);  // hess[j]: column of length j+2
  std::vector<double> cs(m), sn(m), g(m + 1);
  std::vector<double> z(n), w(n);

  int total_iterations = 0;
  double rel_residual = 1.0;

  while (total_iterations < config.max_iterations) {
    std::vector<double> r = residual(a, x, b);
    const double beta = norm2(r);
    rel_residual = beta / b_norm;
    if (rel_residual <= config.rel_tol) return x;

    v[0] = std::move(r);
    for (double& value : v[0]) value /= beta;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;

    int j = 0;
    for (; j < m && total_iterations < config.max_iterations; ++j, ++total_iterations) {
      apply_precond(v[j], z);
      a.multiply(z, w);

      hess[j].assign(j + 2, 0.0);
      for (int i = 0; i <= j; ++i) {  // modified Gram-Schmidt
        const double hij = dot(w, v[i]);
        hess[j][i] = hij;
        for (int k = 0; k < n; ++k) w[k] -= hij * v[i][k];
      }
      const double h_next = norm2(w);
      hess[j][j + 1] = h_next;
      if (h_next > 0.0) {
        v[j + 1] = w;
        for (double& value : v[j + 1]) value /= h_next;
      } else {
        v[j + 1].assign(n, 0.0);  // lucky breakdown; rotations finish the solve
      }

      for (int i = 0; i < j; ++i) {  // previous Givens rotations
        const double t = cs[i] * hess[j][i] + sn[i] * hess[j][i + 1];
        hess[j][i + 1] = -sn[i] * hess[j][i] + cs[i] * hess[j][i + 1];
        hess[j][i] = t;
      }
      const double denom = std::hypot(hess[j][j], hess[j][j + 1]);
      cs[j] = hess[j][j] / denom;
      sn[j] = hess[j][j + 1] / denom;
      hess[j][j] = denom;
      hess[j][j + 1] = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] *= cs[j];

      if (std::abs(g[j + 1]) / b_norm <= config.rel_tol) {
        ++j;
        ++total_iterations;
        break;
      }
    }

    // y = H^{-1} g by back substitution, then x += M^{-1} (V y).
    std::vector<double> y(j, 0.0);
    for (int i = j - 1; i >= 0; --i) {
      double s = g[i];
      for (int k = i + 1; k < j; ++k) s -= hess[k][i] * y[k];
      y[i] = s / hess[i][i];
    }
    std::vector<double> update(n, 0.0);
    for (int i = 0; i < j; ++i)
      for (int k = 0; k < n; ++k) update[k] += y[i] * v[i][k];
    apply_precond(update, z);
    for (int k = 0; k < n; ++k) x[k] += z[k];
  }

  rel_residual = norm2(residual(a, x, b)) / b_norm;
  if (rel_residual <= config.rel_tol) return x;
  throw ConvergenceFailureError("GMRES: no convergence within " +
                                    std::to_string(config.max_iterations) +
                                    " iterations (relative residual " +
                                    std::to_string(rel_residual) + ")",
                                rel_residual);
}

inline void check_residual(const CsrMatrix& a, const std::vector<double>& x,
                           const std::vector<double>& b, double rel_tol, const char* who) {
  const double b_norm = norm2(b);
  if (b_norm == 0.0) return;
  const double rel = norm2(residual(a, x, b)) / b_norm;
  if (!(rel <= rel_tol))
    throw ConvergenceFailureError(std::string(who) + ": residual post-check failed (relative " +
                                      std::to_string(rel) + ")",
                                  rel);
}

}  // namespace detail

/// Sparse LU with approximate-minimum-degree ordering on the symmetrized
/// pattern and partial pivoting.
inline std::vector<double> solve_direct_lu(const CsrMatrix& a, const std::vector<double>& b,
                                           double rel_tol = 1e-10) {
  if (norm2(b) == 0.0) return std::vector<double>(a.rows, 0.0);
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::AMDOrdering<int>> lu;
  const Eigen::SparseMatrix<double> mat = detail::to_eigen(a);
  lu.compute(mat);
  if (lu.info() != Eigen::Success) throw SingularMatrixError("DirectLU: factorization failed");
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
  const Eigen::VectorXd sol = lu.solve(rhs);
  std::vector<double> x(sol.data(), sol.data() + sol.size());
  detail::check_residual(a, x, b, rel_tol, "DirectLU");
  return x;
}

/// Solves the (square, nonsymmetric) system with the configured method.
/// Dimension-0 systems yield an empty vector.
inline std::vector<double> solve(const SparseSystem& system, const SolverConfig& config = {}) {
  config.validate();
  if (system.matrix.rows != system.matrix.cols)
    throw std::invalid_argument("solve: system matrix must be square");
  if (system.dimension() == 0) return {};
  if (config.method == SolverMethod::DirectLU)
    return solve_direct_lu(system.matrix, system.rhs, std::min(config.rel_tol, 1e-10));
  return detail::solve_gmres(system.matrix, system.rhs, config);
}

/// Reusable simplicial LDLT factorization for the auxiliary symmetric
/// positive definite systems (mass Gram, spatial stiffness).
class SpdFactorization {
 public:
  explicit SpdFactorization(const CsrMatrix& a) : matrix_(&a) {
    eigen_matrix_ = detail::to_eigen(a);
    ldlt_.compute(eigen_matrix_);
    if (ldlt_.info() != Eigen::Success)
      throw SingularMatrixError("SpdFactorization: factorization failed (matrix not SPD?)");
  }

  std::vector<double> solve(const std::vector<double>& b, double rel_tol = 1e-10) const {
    if (matrix_->rows == 0) return {};
    if (norm2(b) == 0.0) return std::vector<double>(matrix_->rows, 0.0);
    const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
    const Eigen::VectorXd sol = ldlt_.solve(rhs);
    std::vector<double> x(sol.data(), sol.data() + sol.size());
    detail::check_residual(*matrix_, x, b, rel_tol, "SpdFactorization");
    return x;
  }

 private:
  const CsrMatrix* matrix_;
  Eigen::SparseMatrix<double> eigen_matrix_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
};

/// One-shot SPD solve.
inline std::vector<double> solve_spd(const CsrMatrix& a, const std::vector<double>& b,
                                     double rel_tol = 1e-10) {
  if (a.rows == 0) return {};
  return SpdFactorization(a).solve(b, rel_tol);
}

}  // namespace stfem

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <utility>
#include <vector>

namespace stfem {

/// Compressed-row sparse matrix; column indices strictly increasing
/// within each row, no duplicate entries.
struct CsrMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_offsets;  // size rows + 1
  std::vector<int> col_indices;
  std::vector<double> values;

  std::size_t nnz() const { return col_indices.size(); }

  void multiply(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(rows, 0.0);
    for (int r = 0; r < rows; ++r) {
      double s = 0.0;
      for (int k = row_offsets[r]; k < row_offsets[r + 1]; ++k)
        s += values[k] * x[col_indices[k]];
      y[r] = s;
    }
  }

  std::vector<double> multiply(const std::vector<double>& x) const {
    std::vector<double> y;
    multiply(x, y);
    return y;
  }

  /// MatrixMarket coordinate format (1-based indices), for debugging.
  void write_matrix_market(std::ostream& os) const {
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << rows << " " << cols << " " << nnz() << "\n";
    char buf[64];
    for (int r = 0; r < rows; ++r) {
      for (int k = row_offsets[r]; k < row_offsets[r + 1]; ++k) {
        std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", r + 1, col_indices[k] + 1, values[k]);
        os << buf;
      }
    }
  }
};

/// Row-wise accumulator for finite element scatter. Entries for the same
/// position are summed in insertion order, so assembly is deterministic
/// for a fixed cell order.
class CsrBuilder {
 public:
  CsrBuilder(int rows, int cols) : rows_(rows), cols_(cols), entries_(rows) {}

  void add(int row, int col, double value) {
    auto& row_entries = entries_[row];
    for (auto& [c, v] : row_entries) {
      if (c == col) {
        v += value;
        return;
      }
    }
    row_entries.emplace_back(col, value);
  }

  CsrMatrix finalize() {
    CsrMatrix csr;
    csr.rows = rows_;
    csr.cols = cols_;
    csr.row_offsets.resize(rows_ + 1, 0);
    std::size_t total = 0;
    for (int r = 0; r < rows_; ++r) {
      total += entries_[r].size();
      csr.row_offsets[r + 1] = static_cast<int>(total);
    }
    csr.col_indices.reserve(total);
    csr.values.reserve(total);
    for (auto& row_entries : entries_) {
      std::sort(row_entries.begin(), row_entries.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      for (const auto& [c, v] : row_entries) {
        csr.col_indices.push_back(c);
        csr.values.push_back(v);
      }
      row_entries.clear();
      row_entries.shrink_to_fit();
    }
    return csr;
  }

 private:
  int rows_;
  int cols_;
  std::vector<std::vector<std::pair<int, double>>> entries_;
};

/// Square nonsymmetric system: matrix over free dofs plus right-hand side.
struct SparseSystem {
  CsrMatrix matrix;
  std::vector<double> rhs;

  int dimension() const { return matrix.rows; }
};

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double norm_inf(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// b - A x
inline std::vector<double> residual(const CsrMatrix& a, const std::vector<double>& x,
                                    const std::vector<double>& b) {
  std::vector<double> r = a.multiply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return r;
}

}  // namespace stfem

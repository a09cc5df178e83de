#pragma once

#include <stdexcept>
#include <string>

namespace stfem {

/// Simplex with (numerically) vanishing volume.
class DegenerateCellError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Direct factorization failed or produced a zero pivot.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative solver exhausted its iteration budget; carries the last
/// relative residual reached.
class ConvergenceFailureError : public std::runtime_error {
 public:
  ConvergenceFailureError(const std::string& what, double final_residual)
      : std::runtime_error(what), final_residual_(final_residual) {}

  double final_residual() const noexcept { return final_residual_; }

 private:
  double final_residual_;
};

/// Mesh lacks a feature an operation requires (e.g. terminal facets).
class InvalidMeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ratio of two norms where the denominator vanishes.
class UndefinedRatioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stfem

#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "stfem/coefficient.hpp"
#include "stfem/geometry.hpp"
#include "stfem/types.hpp"

namespace stfem {

/// Closed-form exact solution of dt u - div(A grad u) = f together with
/// its derivatives and source term. Source terms are derived by hand and
/// validated against the finite-difference oracle, never differentiated
/// numerically inside the solver.
template <int M>
struct ManufacturedSolution {
  static constexpr int d = M - 1;

  std::string name;
  Geometry geometry = Geometry::UnitSquare;
  std::function<double(const Point<M>&)> u;
  std::function<double(const Point<M>&)> dt_u;
  std::function<std::array<double, d>(const Point<M>&)> grad_x;
  std::function<double(const Point<M>&)> source;
  CoefficientField<M> coefficient = CoefficientField<M>::identity();
  bool zero_initial = false;
  bool zero_lateral = false;
  bool zero_terminal = false;
};

/// Spatial dimension of the paper's four experiments.
inline int example_spatial_dim(int id) {
  switch (id) {
    case 1:
    case 4: return 1;
    case 2:
    case 3: return 2;
    default: throw std::invalid_argument("example: unknown id " + std::to_string(id));
  }
}

template <int M>
ManufacturedSolution<M> example(int id) {
  static_assert(M == 2 || M == 3);
  constexpr double pi = std::numbers::pi;
  if (example_spatial_dim(id) != M - 1)
    throw std::invalid_argument("example " + std::to_string(id) + " has spatial dimension " +
                                std::to_string(example_spatial_dim(id)));

  ManufacturedSolution<M> sol;
  sol.name = "example" + std::to_string(id);

  if constexpr (M == 2) {
    if (id == 1) {
      // u = sin(pi x) cos(pi t) on the unit square; nonzero initial data.
      sol.geometry = Geometry::UnitSquare;
      sol.zero_initial = false;
      sol.zero_lateral = true;
      sol.zero_terminal = false;
      sol.u = [pi](const Point<2>& p) { return std::sin(pi * p[0]) * std::cos(pi * p[1]); };
      sol.dt_u = [pi](const Point<2>& p) { return -pi * std::sin(pi * p[0]) * std::sin(pi * p[1]); };
      sol.grad_x = [pi](const Point<2>& p) {
        return std::array<double, 1>{pi * std::cos(pi * p[0]) * std::cos(pi * p[1])};
      };
      sol.source = [pi](const Point<2>& p) {
        return -pi * std::sin(pi * p[0]) * std::sin(pi * p[1]) +
               pi * pi * std::sin(pi * p[0]) * std::cos(pi * p[1]);
      };
    } else {
      // u = sin(pi x) t e^{2t} on the moving domain -t < x < 0.5 + t;
      // nonzero lateral data.
      sol.geometry = Geometry::Trapezoid;
      sol.zero_initial = true;
      sol.zero_lateral = false;
      sol.zero_terminal = false;
      sol.u = [pi](const Point<2>& p) {
        return std::sin(pi * p[0]) * p[1] * std::exp(2.0 * p[1]);
      };
      sol.dt_u = [pi](const Point<2>& p) {
        return std::sin(pi * p[0]) * std::exp(2.0 * p[1]) * (1.0 + 2.0 * p[1]);
      };
      sol.grad_x = [pi](const Point<2>& p) {
        return std::array<double, 1>{pi * std::cos(pi * p[0]) * p[1] * std::exp(2.0 * p[1])};
      };
      sol.source = [pi](const Point<2>& p) {
        return std::sin(pi * p[0]) * std::exp(2.0 * p[1]) *
               (1.0 + 2.0 * p[1] + pi * pi * p[1]);
      };
    }
  } else {
    sol.geometry = Geometry::UnitCube;
    sol.zero_initial = true;
    sol.zero_lateral = true;
    if (id == 2) {
      // u = sin(pi x) sin(pi y) sin(pi t); vanishes at the terminal slice.
      sol.zero_terminal = true;
      sol.u = [pi](const Point<3>& p) {
        return std::sin(pi * p[0]) * std::sin(pi * p[1]) * std::sin(pi * p[2]);
      };
      sol.dt_u = [pi](const Point<3>& p) {
        return pi * std::sin(pi * p[0]) * std::sin(pi * p[1]) * std::cos(pi * p[2]);
      };
      sol.grad_x = [pi](const Point<3>& p) {
        return std::array<double, 2>{
            pi * std::cos(pi * p[0]) * std::sin(pi * p[1]) * std::sin(pi * p[2]),
            pi * std::sin(pi * p[0]) * std::cos(pi * p[1]) * std::sin(pi * p[2])};
      };
      sol.source = [pi](const Point<3>& p) {
        const double space = std::sin(pi * p[0]) * std::sin(pi * p[1]);
        return space * (pi * std::cos(pi * p[2]) + 2.0 * pi * pi * std::sin(pi * p[2]));
      };
    } else {
      // u = sin(pi x) sin(pi y) (-c t^2 + t), c = (2 pi^2 + 1)/(2 pi^2 + 2).
      constexpr double c = (2.0 * pi * pi + 1.0) / (2.0 * pi * pi + 2.0);
      sol.zero_terminal = false;
      auto time_factor = [](double t) { return -c * t * t + t; };
      sol.u = [pi, time_factor](const Point<3>& p) {
        return std::sin(pi * p[0]) * std::sin(pi * p[1]) * time_factor(p[2]);
      };
      sol.dt_u = [pi](const Point<3>& p) {
        return std::sin(pi * p[0]) * std::sin(pi * p[1]) * (-2.0 * c * p[2] + 1.0);
      };
      sol.grad_x = [pi, time_factor](const Point<3>& p) {
        return std::array<double, 2>{
            pi * std::cos(pi * p[0]) * std::sin(pi * p[1]) * time_factor(p[2]),
            pi * std::sin(pi * p[0]) * std::cos(pi * p[1]) * time_factor(p[2])};
      };
      sol.source = [pi, time_factor](const Point<3>& p) {
        const double space = std::sin(pi * p[0]) * std::sin(pi * p[1]);
        return space * ((-2.0 * c * p[2] + 1.0) + 2.0 * pi * pi * time_factor(p[2]));
      };
    }
  }
  return sol;
}

/// u = x (+ y) + t with f = 1; lies in the P1 space on any mesh.
template <int M>
ManufacturedSolution<M> affine_solution() {
  ManufacturedSolution<M> sol;
  sol.name = "affine";
  sol.geometry = (M == 2) ? Geometry::UnitSquare : Geometry::UnitCube;
  sol.u = [](const Point<M>& p) {
    double s = 0.0;
    for (double c : p) s += c;
    return s;
  };
  sol.dt_u = [](const Point<M>&) { return 1.0; };
  sol.grad_x = [](const Point<M>&) {
    std::array<double, M - 1> g;
    g.fill(1.0);
    return g;
  };
  sol.source = [](const Point<M>&) { return 1.0; };
  return sol;
}

template <int M>
ManufacturedSolution<M> zero_solution(Geometry geometry) {
  ManufacturedSolution<M> sol;
  sol.name = "zero";
  sol.geometry = geometry;
  sol.zero_initial = sol.zero_lateral = sol.zero_terminal = true;
  sol.u = [](const Point<M>&) { return 0.0; };
  sol.dt_u = [](const Point<M>&) { return 0.0; };
  sol.grad_x = [](const Point<M>&) { return std::array<double, M - 1>{}; };
  sol.source = [](const Point<M>&) { return 0.0; };
  return sol;
}

namespace detail {

/// Fourth-order central differences of a scalar callback; the
/// independent oracle for validating hand-derived source terms.
template <int M>
double fd_derivative(const std::function<double(const Point<M>&)>& fn, Point<M> p, int axis,
                     double step) {
  auto at = [&](double offset) {
    Point<M> q = p;
    q[axis] += offset;
    return fn(q);
  };
  return (8.0 * (at(step) - at(-step)) - (at(2.0 * step) - at(-2.0 * step))) / (12.0 * step);
}

template <int M>
double fd_second_derivative(const std::function<double(const Point<M>&)>& fn, Point<M> p,
                            int axis, double step) {
  auto at = [&](double offset) {
    Point<M> q = p;
    q[axis] += offset;
    return fn(q);
  };
  return (-at(2.0 * step) + 16.0 * at(step) - 30.0 * at(0.0) + 16.0 * at(-step) -
          at(-2.0 * step)) /
         (12.0 * step * step);
}

}  // namespace detail

/// Maximum of |dt u - lap u - f| over uniform random interior samples,
/// with both derivatives taken by fourth-order finite differences of the
/// u callback (requires A = identity).
template <int M>
double pde_residual_check(const ManufacturedSolution<M>& sol, int n_samples, double step = 1e-3,
                          std::uint64_t seed = 0x5eedULL) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    Point<M> ref;
    for (int k = 0; k < M; ++k) ref[k] = unif(rng);
    const Point<M> p = map_reference_point<M>(sol.geometry, ref);
    double laplacian = 0.0;
    for (int axis = 0; axis < M - 1; ++axis)
      laplacian += detail::fd_second_derivative<M>(sol.u, p, axis, step);
    const double dt = detail::fd_derivative<M>(sol.u, p, M - 1, step);
    worst = std::max(worst, std::abs(dt - laplacian - sol.source(p)));
  }
  return worst;
}

}  // namespace stfem

#pragma once

#include <functional>
#include <vector>

#include "stfem/coefficient.hpp"
#include "stfem/dofmap.hpp"
#include "stfem/element.hpp"
#include "stfem/mesh.hpp"
#include "stfem/quadrature.hpp"
#include "stfem/sparse.hpp"

namespace stfem {

template <int M>
using LocalMatrix = SmallMatrix<M + 1, M + 1>;

namespace detail {

/// Physical P1 gradients on a cell, split into spatial part and time
/// component (gradients are constant per simplex).
template <int M>
struct CellGradients {
  std::array<std::array<double, M - 1>, M + 1> spatial;
  std::array<double, M + 1> time;

  explicit CellGradients(const CellMap<M>& map) {
    const auto ref = eval_p1<M>(Point<M>{});  // gradients independent of the point
    for (int i = 0; i <= M; ++i) {
      const Point<M> g = map.push_gradient(ref.gradients[i]);
      for (int k = 0; k < M - 1; ++k) spatial[i][k] = g[k];
      time[i] = g[M - 1];
    }
  }
};

template <int d>
inline double dot_d(const std::array<double, d>& a, const std::array<double, d>& b) {
  double s = 0.0;
  for (int k = 0; k < d; ++k) s += a[k] * b[k];
  return s;
}

}  // namespace detail

/// Element matrix of the space-time bilinear form:
///   entry (i,j) = int_K (dt phi_j) phi_i + (A grad_x phi_j) . grad_x phi_i.
/// Exact for constant A (the identity path skips the quadrature loop).
template <int M>
LocalMatrix<M> local_matrix(const std::array<Point<M>, M + 1>& verts,
                            const CoefficientField<M>& a_field, const QuadratureRule<M>& quad) {
  const CellMap<M> map = cell_map<M>(verts);
  const detail::CellGradients<M> grads(map);
  const double volume = map.abs_det * (M == 2 ? 0.5 : 1.0 / 6.0);

  LocalMatrix<M> local{};
  if (a_field.is_identity) {
    for (int i = 0; i <= M; ++i)
      for (int j = 0; j <= M; ++j)
        local[i][j] = volume * detail::dot_d<M - 1>(grads.spatial[i], grads.spatial[j]) +
                      grads.time[j] * volume / (M + 1);
    return local;
  }

  for (std::size_t q = 0; q < quad.size(); ++q) {
    const auto basis = eval_p1<M>(quad.points[q]);
    const Point<M> x = map.to_physical(quad.points[q]);
    const double w = quad.weights[q] * map.abs_det;
    std::array<std::array<double, M - 1>, M + 1> a_grad;
    for (int j = 0; j <= M; ++j) a_grad[j] = a_field.apply(x, grads.spatial[j]);
    for (int i = 0; i <= M; ++i)
      for (int j = 0; j <= M; ++j)
        local[i][j] += w * (grads.time[j] * basis.values[i] +
                            detail::dot_d<M - 1>(a_grad[j], grads.spatial[i]));
  }
  return local;
}

/// Element Gram matrix of the nodal basis in L2.
template <int M>
LocalMatrix<M> local_mass(const std::array<Point<M>, M + 1>& verts,
                          const QuadratureRule<M>& quad) {
  const CellMap<M> map = cell_map<M>(verts);
  LocalMatrix<M> local{};
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const auto basis = eval_p1<M>(quad.points[q]);
    const double w = quad.weights[q] * map.abs_det;
    for (int i = 0; i <= M; ++i)
      for (int j = 0; j <= M; ++j) local[i][j] += w * (basis.values[i] * basis.values[j]);
  }
  return local;
}

/// Element matrix of the V inner product (spatial gradients only):
///   entry (i,j) = int_K (A grad_x phi_j) . grad_x phi_i.
template <int M>
LocalMatrix<M> local_spatial_stiffness(const std::array<Point<M>, M + 1>& verts,
                                       const CoefficientField<M>& a_field,
                                       const QuadratureRule<M>& quad) {
  const CellMap<M> map = cell_map<M>(verts);
  const detail::CellGradients<M> grads(map);
  const double volume = map.abs_det * (M == 2 ? 0.5 : 1.0 / 6.0);

  LocalMatrix<M> local{};
  if (a_field.is_identity) {
    for (int i = 0; i <= M; ++i)
      for (int j = 0; j <= M; ++j)
        local[i][j] = volume * detail::dot_d<M - 1>(grads.spatial[i], grads.spatial[j]);
    return local;
  }

  for (std::size_t q = 0; q < quad.size(); ++q) {
    const Point<M> x = map.to_physical(quad.points[q]);
    const double w = quad.weights[q] * map.abs_det;
    for (int j = 0; j <= M; ++j) {
      const auto a_grad = a_field.apply(x, grads.spatial[j]);
      for (int i = 0; i <= M; ++i)
        local[i][j] += w * detail::dot_d<M - 1>(a_grad, grads.spatial[i]);
    }
  }
  return local;
}

/// Assembles the discrete space-time system over free dofs. Constrained
/// couplings are moved to the right-hand side (Dirichlet lift):
///   rhs_i = sum_K int_K f phi_i - sum_{j constrained} a(phi_j, phi_i) g_j.
/// Cells are visited in index order, so repeated assembly of the same
/// inputs is bitwise reproducible.
template <int M>
SparseSystem assemble_system(const SpaceTimeMesh<M>& mesh, const DofMap& dofmap,
                             const CoefficientField<M>& a_field,
                             const std::function<double(const Point<M>&)>& source,
                             int quad_degree) {
  const QuadratureRule<M> quad = quadrature<M>(quad_degree);
  std::vector<P1Values<M>> basis_at(quad.size());
  for (std::size_t q = 0; q < quad.size(); ++q) basis_at[q] = eval_p1<M>(quad.points[q]);

  CsrBuilder builder(dofmap.n_free, dofmap.n_free);
  std::vector<double> rhs(dofmap.n_free, 0.0);

  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const auto coords = mesh.cell_coords(cell);
    const LocalMatrix<M> local = local_matrix<M>(coords, a_field, quad);
    const auto& conn = mesh.cells[cell];

    std::array<double, M + 1> load{};
    if (source) {
      const CellMap<M> map = cell_map<M>(coords);
      for (std::size_t q = 0; q < quad.size(); ++q) {
        const double w = quad.weights[q] * map.abs_det * source(map.to_physical(quad.points[q]));
        for (int i = 0; i <= M; ++i) load[i] += w * basis_at[q].values[i];
      }
    }

    for (int i = 0; i <= M; ++i) {
      const int gi = dofmap.free_index[conn[i]];
      if (gi < 0) continue;
      rhs[gi] += load[i];
      for (int j = 0; j <= M; ++j) {
        const int gj = dofmap.free_index[conn[j]];
        if (gj >= 0)
          builder.add(gi, gj, local[i][j]);
        else
          rhs[gi] -= local[i][j] * dofmap.prescribed[conn[j]];
      }
    }
  }
  return SparseSystem{builder.finalize(), std::move(rhs)};
}

/// L2 Gram matrix of the full nodal basis (all nodes, no constraints).
template <int M>
CsrMatrix assemble_mass(const SpaceTimeMesh<M>& mesh, int quad_degree) {
  const QuadratureRule<M> quad = quadrature<M>(quad_degree);
  const int n = mesh.n_vertices();
  CsrBuilder builder(n, n);
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const LocalMatrix<M> local = local_mass<M>(mesh.cell_coords(cell), quad);
    const auto& conn = mesh.cells[cell];
    for (int i = 0; i <= M; ++i)
      for (int j = 0; j <= M; ++j) builder.add(conn[i], conn[j], local[i][j]);
  }
  return builder.finalize();
}

/// V-inner-product matrix restricted to free dofs; SPD by the Poincare
/// inequality in the spatial variable.
template <int M>
CsrMatrix assemble_spatial_stiffness(const SpaceTimeMesh<M>& mesh, const DofMap& dofmap,
                                     const CoefficientField<M>& a_field, int quad_degree = 2) {
  const QuadratureRule<M> quad = quadrature<M>(quad_degree);
  CsrBuilder builder(dofmap.n_free, dofmap.n_free);
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const LocalMatrix<M> local = local_spatial_stiffness<M>(mesh.cell_coords(cell), a_field, quad);
    const auto& conn = mesh.cells[cell];
    for (int i = 0; i <= M; ++i) {
      const int gi = dofmap.free_index[conn[i]];
      if (gi < 0) continue;
      for (int j = 0; j <= M; ++j) {
        const int gj = dofmap.free_index[conn[j]];
        if (gj >= 0) builder.add(gi, gj, local[i][j]);
      }
    }
  }
  return builder.finalize();
}

/// V-inner-product matrix over all nodes (quadratic-form evaluation).
template <int M>
CsrMatrix assemble_spatial_stiffness_full(const SpaceTimeMesh<M>& mesh,
                                          const CoefficientField<M>& a_field,
                                          int quad_degree = 2) {
  const QuadratureRule<M> quad = quadrature<M>(quad_degree);
  const int n = mesh.n_vertices();
  CsrBuilder builder(n, n);
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const LocalMatrix<M> local = local_spatial_stiffness<M>(mesh.cell_coords(cell), a_field, quad);
    const auto& conn = mesh.cells[cell];
    for (int i = 0; i <= M; ++i)
      for (int j = 0; j <= M; ++j) builder.add(conn[i], conn[j], local[i][j]);
  }
  return builder.finalize();
}

/// Load vector over all nodes with a per-cell integrand callback
/// (cell index, physical point) -> value.
template <int M>
std::vector<double> assemble_load_cellwise(
    const SpaceTimeMesh<M>& mesh,
    const std::function<double(int, const Point<M>&)>& integrand, int quad_degree) {
  const QuadratureRule<M> quad = quadrature<M>(quad_degree);
  std::vector<P1Values<M>> basis_at(quad.size());
  for (std::size_t q = 0; q < quad.size(); ++q) basis_at[q] = eval_p1<M>(quad.points[q]);

  std::vector<double> load(mesh.n_vertices(), 0.0);
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const CellMap<M> map = cell_map<M>(mesh.cell_coords(cell));
    const auto& conn = mesh.cells[cell];
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const double w =
          quad.weights[q] * map.abs_det * integrand(cell, map.to_physical(quad.points[q]));
      for (int i = 0; i <= M; ++i) load[conn[i]] += w * basis_at[q].values[i];
    }
  }
  return load;
}

/// Load vector of a plain function of the space-time point.
template <int M>
std::vector<double> assemble_load(const SpaceTimeMesh<M>& mesh,
                                  const std::function<double(const Point<M>&)>& fn,
                                  int quad_degree) {
  return assemble_load_cellwise<M>(
      mesh, [&fn](int, const Point<M>& x) { return fn(x); }, quad_degree);
}

}  // namespace stfem

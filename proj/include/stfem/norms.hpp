#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "stfem/assembly.hpp"
#include "stfem/dofmap.hpp"
#include "stfem/errors.hpp"
#include "stfem/manufactured.hpp"
#include "stfem/mesh.hpp"
#include "stfem/solver.hpp"

namespace stfem {

/// P1 function on a space-time mesh, one coefficient per node
/// (constrained nodes carry their prescribed boundary values).
template <int M>
struct DiscreteField {
  const SpaceTimeMesh<M>* mesh = nullptr;
  std::vector<double> coefficients;
};

/// Nodal interpolant of a callback.
template <int M>
DiscreteField<M> interpolate(const SpaceTimeMesh<M>& mesh,
                             const std::function<double(const Point<M>&)>& fn) {
  DiscreteField<M> field{&mesh, std::vector<double>(mesh.n_vertices())};
  for (int v = 0; v < mesh.n_vertices(); ++v) field.coefficients[v] = fn(mesh.vertices[v]);
  return field;
}

/// Scatters free-dof coefficients back to the full nodal vector,
/// filling constrained slots with the dofmap's prescribed values.
template <int M>
DiscreteField<M> make_field(const SpaceTimeMesh<M>& mesh, const DofMap& dofmap,
                            const std::vector<double>& free_coeffs) {
  DiscreteField<M> field{&mesh, std::vector<double>(mesh.n_vertices())};
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const int fi = dofmap.free_index[v];
    field.coefficients[v] = (fi >= 0) ? free_coeffs[fi] : dofmap.prescribed[v];
  }
  return field;
}

/// Errors of one refinement level in the paper's table norms.
struct ErrorReport {
  int n = 0;          // subdivisions
  double h = 0.0;     // table convention: 1/N
  double err_l2_terminal = 0.0;
  double err_l2_cylinder = 0.0;
  double err_h1_cylinder = 0.0;
  std::optional<double> err_hnorm;
};

namespace detail {

inline constexpr int error_quad_degree(int m) { return m == 2 ? 5 : 4; }

template <int M>
double facet_measure(const std::array<Point<M>, M>& verts) {
  if constexpr (M == 2) {
    return distance<2>(verts[0], verts[1]);
  } else {
    Point<3> e1, e2;
    for (int k = 0; k < 3; ++k) {
      e1[k] = verts[1][k] - verts[0][k];
      e2[k] = verts[2][k] - verts[0][k];
    }
    const Point<3> cross = {e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2],
                            e1[0] * e2[1] - e1[1] * e2[0]};
    return 0.5 * std::sqrt(dot<3>(cross, cross));
  }
}

template <int M>
std::array<double, M - 1> field_spatial_gradient(const CellGradients<M>& grads,
                                                 const std::array<int, M + 1>& conn,
                                                 const std::vector<double>& coeffs) {
  std::array<double, M - 1> g{};
  for (int i = 0; i <= M; ++i)
    for (int k = 0; k < M - 1; ++k) g[k] += coeffs[conn[i]] * grads.spatial[i][k];
  return g;
}

template <int M>
double field_time_derivative(const CellGradients<M>& grads, const std::array<int, M + 1>& conn,
                             const std::vector<double>& coeffs) {
  double g = 0.0;
  for (int i = 0; i <= M; ++i) g += coeffs[conn[i]] * grads.time[i];
  return g;
}

inline CsrMatrix restrict_to_free(const CsrMatrix& full, const DofMap& dofmap) {
  CsrBuilder builder(dofmap.n_free, dofmap.n_free);
  for (int r = 0; r < full.rows; ++r) {
    const int fr = dofmap.free_index[r];
    if (fr < 0) continue;
    for (int k = full.row_offsets[r]; k < full.row_offsets[r + 1]; ++k) {
      const int fc = dofmap.free_index[full.col_indices[k]];
      if (fc >= 0) builder.add(fr, fc, full.values[k]);
    }
  }
  return builder.finalize();
}

inline std::vector<double> gather_free(const std::vector<double>& nodal, const DofMap& dofmap) {
  std::vector<double> out(dofmap.n_free);
  for (int v = 0; v < dofmap.n_nodes(); ++v) {
    const int fi = dofmap.free_index[v];
    if (fi >= 0) out[fi] = nodal[v];
  }
  return out;
}

}  // namespace detail

/// || (u - u_h)(., T) ||_{L2(Omega)}: trace error over the terminal
/// facets, integrated with the facet-dimension degree-5 rule.
template <int M>
double l2_error_terminal(const DiscreteField<M>& field, const ManufacturedSolution<M>& exact) {
  const auto& mesh = *field.mesh;
  constexpr int F = M - 1;  // facet simplex dimension
  const QuadratureRule<F> quad = quadrature<F>(5);
  constexpr double ref_volume_inv = (F == 1) ? 1.0 : 2.0;

  bool any_terminal = false;
  double sum = 0.0;
  for (const auto& facet : mesh.boundary_facets) {
    if (facet.tag != BoundaryTag::Terminal) continue;
    any_terminal = true;
    std::array<Point<M>, M> verts;
    for (int v = 0; v < M; ++v) verts[v] = mesh.vertices[facet.vertices[v]];
    const double measure = detail::facet_measure<M>(verts);

    for (std::size_t q = 0; q < quad.size(); ++q) {
      std::array<double, M> bary;  // P1 trace = P1 on the facet simplex
      bary[0] = 1.0;
      for (int k = 0; k < F; ++k) {
        bary[k + 1] = quad.points[q][k];
        bary[0] -= quad.points[q][k];
      }
      Point<M> x{};
      double uh = 0.0;
      for (int v = 0; v < M; ++v) {
        for (int k = 0; k < M; ++k) x[k] += bary[v] * verts[v][k];
        uh += bary[v] * field.coefficients[facet.vertices[v]];
      }
      const double diff = exact.u(x) - uh;
      sum += quad.weights[q] * ref_volume_inv * measure * diff * diff;
    }
  }
  if (!any_terminal) throw InvalidMeshError("l2_error_terminal: mesh has no terminal facets");
  return std::sqrt(sum);
}

/// || u - u_h ||_{L2(Omega_T)}
template <int M>
double l2_error_cylinder(const DiscreteField<M>& field, const ManufacturedSolution<M>& exact) {
  const auto& mesh = *field.mesh;
  const QuadratureRule<M> quad = quadrature<M>(detail::error_quad_degree(M));
  std::vector<P1Values<M>> basis_at(quad.size());
  for (std::size_t q = 0; q < quad.size(); ++q) basis_at[q] = eval_p1<M>(quad.points[q]);

  double sum = 0.0;
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const CellMap<M> map = cell_map<M>(mesh.cell_coords(cell));
    const auto& conn = mesh.cells[cell];
    for (std::size_t q = 0; q < quad.size(); ++q) {
      double uh = 0.0;
      for (int i = 0; i <= M; ++i) uh += field.coefficients[conn[i]] * basis_at[q].values[i];
      const double diff = exact.u(map.to_physical(quad.points[q])) - uh;
      sum += quad.weights[q] * map.abs_det * diff * diff;
    }
  }
  return std::sqrt(sum);
}

/// || u - u_h ||_{H1(Omega_T)} with the full space-time gradient
/// D = (grad_x, dt).
template <int M>
double h1_error_cylinder(const DiscreteField<M>& field, const ManufacturedSolution<M>& exact) {
  const auto& mesh = *field.mesh;
  const QuadratureRule<M> quad = quadrature<M>(detail::error_quad_degree(M));
  std::vector<P1Values<M>> basis_at(quad.size());
  for (std::size_t q = 0; q < quad.size(); ++q) basis_at[q] = eval_p1<M>(quad.points[q]);

  double sum = 0.0;
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const CellMap<M> map = cell_map<M>(mesh.cell_coords(cell));
    const detail::CellGradients<M> grads(map);
    const auto& conn = mesh.cells[cell];
    const auto grad_uh = detail::field_spatial_gradient<M>(grads, conn, field.coefficients);
    const double dt_uh = detail::field_time_derivative<M>(grads, conn, field.coefficients);

    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Point<M> x = map.to_physical(quad.points[q]);
      double uh = 0.0;
      for (int i = 0; i <= M; ++i) uh += field.coefficients[conn[i]] * basis_at[q].values[i];
      const double diff = exact.u(x) - uh;
      double grad_sq = 0.0;
      const auto gx = exact.grad_x(x);
      for (int k = 0; k < M - 1; ++k) {
        const double gd = gx[k] - grad_uh[k];
        grad_sq += gd * gd;
      }
      const double td = exact.dt_u(x) - dt_uh;
      grad_sq += td * td;
      sum += quad.weights[q] * map.abs_det * (diff * diff + grad_sq);
    }
  }
  return std::sqrt(sum);
}

/// V-norm of a discrete field: (int (A grad_x u_h) . grad_x u_h)^{1/2}.
template <int M>
double v_norm(const DiscreteField<M>& field, const CoefficientField<M>& a_field) {
  const auto& mesh = *field.mesh;
  const QuadratureRule<M> quad = quadrature<M>(2);
  double sum = 0.0;
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const CellMap<M> map = cell_map<M>(mesh.cell_coords(cell));
    const detail::CellGradients<M> grads(map);
    const auto g = detail::field_spatial_gradient<M>(grads, mesh.cells[cell], field.coefficients);
    if (a_field.is_identity) {
      const double volume = map.abs_det * (M == 2 ? 0.5 : 1.0 / 6.0);
      sum += volume * detail::dot_d<M - 1>(g, g);
    } else {
      for (std::size_t q = 0; q < quad.size(); ++q) {
        const Point<M> x = map.to_physical(quad.points[q]);
        sum += quad.weights[q] * map.abs_det * detail::dot_d<M - 1>(a_field.apply(x, g), g);
      }
    }
  }
  return std::sqrt(sum);
}

/// V-norm of the error u - u_h (exact spatial gradient from callbacks).
template <int M>
double v_norm_error(const DiscreteField<M>& field, const ManufacturedSolution<M>& exact) {
  const auto& mesh = *field.mesh;
  const QuadratureRule<M> quad = quadrature<M>(detail::error_quad_degree(M));
  double sum = 0.0;
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const CellMap<M> map = cell_map<M>(mesh.cell_coords(cell));
    const detail::CellGradients<M> grads(map);
    const auto grad_uh = detail::field_spatial_gradient<M>(grads, mesh.cells[cell],
                                                           field.coefficients);
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Point<M> x = map.to_physical(quad.points[q]);
      const auto gx = exact.grad_x(x);
      std::array<double, M - 1> diff;
      for (int k = 0; k < M - 1; ++k) diff[k] = gx[k] - grad_uh[k];
      sum += quad.weights[q] * map.abs_det *
             detail::dot_d<M - 1>(exact.coefficient.apply(x, diff), diff);
    }
  }
  return std::sqrt(sum);
}

/// Discrete spatial Riesz lift q_h(y) of dt y for y = u - u_h:
/// solves int (A grad q_h) . grad phi = int (dt u - dt u_h) phi over the
/// free dofs of U_h (q_h vanishes on the lateral closure and at t = 0).
template <int M>
DiscreteField<M> q_h_field(const SpaceTimeMesh<M>& mesh, const DofMap& dofmap,
                           const CoefficientField<M>& a_field,
                           const std::function<double(const Point<M>&)>& dt_exact,
                           const DiscreteField<M>& field) {
  std::vector<double> dt_uh(mesh.n_cells());
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    const CellMap<M> map = cell_map<M>(mesh.cell_coords(cell));
    const detail::CellGradients<M> grads(map);
    dt_uh[cell] = detail::field_time_derivative<M>(grads, mesh.cells[cell], field.coefficients);
  }
  const std::vector<double> load = assemble_load_cellwise<M>(
      mesh,
      [&](int cell, const Point<M>& x) { return dt_exact(x) - dt_uh[cell]; },
      detail::error_quad_degree(M));

  const CsrMatrix stiffness = assemble_spatial_stiffness<M>(mesh, dofmap, a_field);
  const std::vector<double> q_free = solve_spd(stiffness, detail::gather_free(load, dofmap));

  DiscreteField<M> q{&mesh, std::vector<double>(mesh.n_vertices(), 0.0)};
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const int fi = dofmap.free_index[v];
    if (fi >= 0) q.coefficients[v] = q_free[fi];
  }
  return q;
}

/// Mesh-dependent norm of the error: (||y||_V^2 + ||q_h(y)||_V^2)^{1/2}
/// with y = u - u_h.
template <int M>
double h_norm_error(const DiscreteField<M>& field, const ManufacturedSolution<M>& exact,
                    const DofMap& dofmap) {
  const double v_err = v_norm_error<M>(field, exact);
  const DiscreteField<M> q =
      q_h_field<M>(*field.mesh, dofmap, exact.coefficient, exact.dt_u, field);
  const double v_q = v_norm<M>(q, exact.coefficient);
  return std::sqrt(v_err * v_err + v_q * v_q);
}

/// L2(Omega_T)-orthogonal projection onto U_h.
template <int M>
DiscreteField<M> l2_project(const SpaceTimeMesh<M>& mesh, const DofMap& dofmap,
                            const std::function<double(const Point<M>&)>& target,
                            int load_quad_degree = -1) {
  if (load_quad_degree < 0) load_quad_degree = detail::error_quad_degree(M);
  const CsrMatrix mass = detail::restrict_to_free(assemble_mass<M>(mesh, 2), dofmap);
  const std::vector<double> load =
      detail::gather_free(assemble_load<M>(mesh, target, load_quad_degree), dofmap);
  const std::vector<double> coeffs = solve_spd(mass, load);

  DiscreteField<M> projection{&mesh, std::vector<double>(mesh.n_vertices(), 0.0)};
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const int fi = dofmap.free_index[v];
    if (fi >= 0) projection.coefficients[v] = coeffs[fi];
  }
  return projection;
}

/// Evaluates the discrete stability quotient
///   sup_{v_h} a(u_h, v_h) / ||v_h||_V  /  ||u_h||_h
/// for given free-dof coefficients. The supremum is the V-norm of the
/// discrete Riesz representative: sqrt(r^T K^{-1} r) with r = A_sys u.
/// Factorizes once; reuse for many fields on the same mesh.
template <int M>
class InfSupTester {
 public:
  InfSupTester(const SpaceTimeMesh<M>& mesh, const DofMap& dofmap,
               const CoefficientField<M>& a_field)
      : system_(assemble_system<M>(mesh, dofmap, a_field, nullptr, 2)),
        stiffness_(assemble_spatial_stiffness<M>(mesh, dofmap, a_field)),
        factorization_(stiffness_) {}

  double ratio(const std::vector<double>& u_free) const {
    const std::vector<double> r = system_.matrix.multiply(u_free);
    const std::vector<double> ku = stiffness_.multiply(u_free);
    std::vector<double> conv(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) conv[i] = r[i] - ku[i];

    const double sup_sq = dot(r, factorization_.solve(r));
    const double u_v_sq = dot(u_free, ku);
    const double q_v_sq = dot(conv, factorization_.solve(conv));
    const double denom_sq = u_v_sq + q_v_sq;
    if (denom_sq <= 0.0)
      throw UndefinedRatioError("infsup_ratio: field has vanishing ||.||_h norm");
    return std::sqrt(sup_sq / denom_sq);
  }

 private:
  SparseSystem system_;
  CsrMatrix stiffness_;
  SpdFactorization factorization_;
};

template <int M>
double infsup_ratio(const SpaceTimeMesh<M>& mesh, const DofMap& dofmap,
                    const CoefficientField<M>& a_field, const std::vector<double>& u_free) {
  return InfSupTester<M>(mesh, dofmap, a_field).ratio(u_free);
}

/// log2(e_coarse / e_fine): observed order under mesh-size halving.
inline double convergence_order(double e_coarse, double e_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0))
    throw std::invalid_argument("convergence_order: errors must be positive");
  return std::log2(e_coarse / e_fine);
}

/// Errors of a discrete solution in the three table norms (optionally
/// also the mesh-dependent norm).
template <int M>
ErrorReport compute_error_report(const DiscreteField<M>& field,
                                 const ManufacturedSolution<M>& exact, const DofMap& dofmap,
                                 bool include_hnorm) {
  ErrorReport report;
  report.n = field.mesh->subdivisions;
  report.h = 1.0 / report.n;
  report.err_l2_terminal = l2_error_terminal<M>(field, exact);
  report.err_l2_cylinder = l2_error_cylinder<M>(field, exact);
  report.err_h1_cylinder = h1_error_cylinder<M>(field, exact);
  if (include_hnorm) report.err_hnorm = h_norm_error<M>(field, exact, dofmap);
  return report;
}

}  // namespace stfem

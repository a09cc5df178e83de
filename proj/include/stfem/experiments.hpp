#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "stfem/io_vtk.hpp"
#include "stfem/manufactured.hpp"
#include "stfem/norms.hpp"

namespace stfem {

/// One refinement sweep: which example, which levels (N = 2^level),
/// solver settings, and what to emit where.
struct RunConfig {
  int example_id = 1;
  int level_min = 2;
  int level_max = 5;
  SolverConfig solver;
  bool include_hnorm = false;
  std::filesystem::path out_dir;
  std::set<std::string> formats;  // subset of {csv, markdown, plotdata, vtk}
  bool dump_matrix = false;       // MatrixMarket per level, debugging aid
  std::ostream* log = nullptr;

  void validate() const {
    example_spatial_dim(example_id);  // throws on unknown id
    if (level_min < 1) throw std::invalid_argument("RunConfig: level_min must be >= 1");
    if (level_max < level_min)
      throw std::invalid_argument("RunConfig: level_max must be >= level_min");
    const int cap = (example_spatial_dim(example_id) == 1) ? 9 : 6;
    if (level_max > cap)
      throw std::invalid_argument("RunConfig: level_max exceeds the desk-scale cap " +
                                  std::to_string(cap) + " for this example");
    for (const auto& f : formats)
      if (f != "csv" && f != "markdown" && f != "plotdata" && f != "vtk")
        throw std::invalid_argument("RunConfig: unknown output format '" + f + "'");
    solver.validate();
  }
};

struct TableRow {
  ErrorReport report;
  std::optional<double> order_l2_terminal;
  std::optional<double> order_l2_cylinder;
  std::optional<double> order_h1_cylinder;
  std::optional<double> order_hnorm;
};

/// Rows sorted by decreasing h; orders are consecutive-level ratios,
/// empty on the first row.
struct ConvergenceTable {
  std::vector<TableRow> rows;
  bool has_hnorm = false;
};

inline void emit_table(const ConvergenceTable& table, const std::string& format,
                       const std::filesystem::path& dir);

namespace detail {

inline std::string format_cell(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string();
}

template <int M>
SpaceTimeMesh<M> build_mesh_for(const ManufacturedSolution<M>& sol, int n) {
  if constexpr (M == 2)
    return build_structured_2d(n, sol.geometry);
  else
    return build_structured_3d(n);
}

template <int M>
ConvergenceTable run_impl(const RunConfig& config) {
  const ManufacturedSolution<M> sol = example<M>(config.example_id);
  const int quad_degree = error_quad_degree(M);

  ConvergenceTable table;
  table.has_hnorm = config.include_hnorm;

  DiscreteField<M> finest_field;
  SpaceTimeMesh<M> finest_mesh;

  for (int level = config.level_min; level <= config.level_max; ++level) {
    const int n = 1 << level;
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    try {
      const SpaceTimeMesh<M> mesh = build_mesh_for<M>(sol, n);
      const DofMap dofmap = build_dofmap<M>(mesh, sol.u);
      const SparseSystem system =
          assemble_system<M>(mesh, dofmap, sol.coefficient, sol.source, quad_degree);
      const auto t1 = clock::now();

      if (config.dump_matrix && !config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        std::ofstream mm(config.out_dir / ("system_N" + std::to_string(n) + ".mtx"));
        system.matrix.write_matrix_market(mm);
      }

      const std::vector<double> free_coeffs = solve(system, config.solver);
      const auto t2 = clock::now();

      const DiscreteField<M> field = make_field<M>(mesh, dofmap, free_coeffs);
      TableRow row;
      row.report = compute_error_report<M>(field, sol, dofmap, config.include_hnorm);
      const auto t3 = clock::now();
      table.rows.push_back(row);

      if (config.log) {
        using ms = std::chrono::duration<double, std::milli>;
        *config.log << "level " << level << ": N=" << n << " h_geom=" << mesh.h
                    << " n_free=" << dofmap.n_free
                    << " assemble=" << ms(t1 - t0).count() << "ms"
                    << " solve=" << ms(t2 - t1).count() << "ms"
                    << " errors=" << ms(t3 - t2).count() << "ms\n";
      }

      if (level == config.level_max) {
        finest_field = field;
        finest_mesh = mesh;
        finest_field.mesh = &finest_mesh;
      }
    } catch (const std::bad_alloc&) {
      throw std::runtime_error("run: out of memory at level " + std::to_string(level) +
                               " (N=" + std::to_string(n) + ")");
    } catch (const std::exception& e) {
      throw std::runtime_error("run: level " + std::to_string(level) +
                               " (N=" + std::to_string(n) + ") failed: " + e.what());
    }
  }

  for (std::size_t r = 1; r < table.rows.size(); ++r) {
    const auto& prev = table.rows[r - 1].report;
    auto& row = table.rows[r];
    row.order_l2_terminal = convergence_order(prev.err_l2_terminal, row.report.err_l2_terminal);
    row.order_l2_cylinder = convergence_order(prev.err_l2_cylinder, row.report.err_l2_cylinder);
    row.order_h1_cylinder = convergence_order(prev.err_h1_cylinder, row.report.err_h1_cylinder);
    if (table.has_hnorm && prev.err_hnorm && row.report.err_hnorm)
      row.order_hnorm = convergence_order(*prev.err_hnorm, *row.report.err_hnorm);
  }

  if (!config.out_dir.empty() && !config.formats.empty()) {
    std::filesystem::create_directories(config.out_dir);
    for (const auto& format : config.formats) {
      if (format == "vtk")
        write_vtk<M>(finest_mesh, (config.out_dir / "solution.vtk").string(),
                     &finest_field.coefficients);
      else
        emit_table(table, format, config.out_dir);
    }
  }
  return table;
}

}  // namespace detail

/// CSV with one row per level; orders are empty on the first row.
/// Floating-point cells use the shortest round-trip decimal, so repeated
/// runs of the same configuration are bitwise identical.
inline void emit_csv(const ConvergenceTable& table, std::ostream& os) {
  os << "N,h,err_l2T,order_l2T,err_l2Q,order_l2Q,err_h1Q,order_h1Q";
  if (table.has_hnorm) os << ",err_hnorm,order_hnorm";
  os << "\n";
  for (const auto& row : table.rows) {
    const auto& rep = row.report;
    os << rep.n << "," << detail::format_double(rep.h) << ","
       << detail::format_double(rep.err_l2_terminal) << ","
       << detail::format_cell(row.order_l2_terminal) << ","
       << detail::format_double(rep.err_l2_cylinder) << ","
       << detail::format_cell(row.order_l2_cylinder) << ","
       << detail::format_double(rep.err_h1_cylinder) << ","
       << detail::format_cell(row.order_h1_cylinder);
    if (table.has_hnorm)
      os << "," << (rep.err_hnorm ? detail::format_double(*rep.err_hnorm) : std::string()) << ","
         << detail::format_cell(row.order_hnorm);
    os << "\n";
  }
}

inline void emit_markdown(const ConvergenceTable& table, std::ostream& os) {
  os << "| h | L2(Omega) at T | order | L2(Q) | order | H1(Q) | order |";
  if (table.has_hnorm) os << " h-norm | order |";
  os << "\n";
  os << "|---|---|---|---|---|---|---|";
  if (table.has_hnorm) os << "---|---|";
  os << "\n";
  for (const auto& row : table.rows) {
    const auto& rep = row.report;
    os << "| " << detail::format_double(rep.h) << " | "
       << detail::format_double(rep.err_l2_terminal) << " | "
       << detail::format_cell(row.order_l2_terminal) << " | "
       << detail::format_double(rep.err_l2_cylinder) << " | "
       << detail::format_cell(row.order_l2_cylinder) << " | "
       << detail::format_double(rep.err_h1_cylinder) << " | "
       << detail::format_cell(row.order_h1_cylinder) << " |";
    if (table.has_hnorm)
      os << " " << (rep.err_hnorm ? detail::format_double(*rep.err_hnorm) : std::string())
         << " | " << detail::format_cell(row.order_hnorm) << " |";
    os << "\n";
  }
}

/// Two gnuplot-style blocks per norm: (log10 h, log10 err) data points,
/// then a reference line of the expected slope through the finest point.
inline void emit_plotdata(const ConvergenceTable& table, std::ostream& os,
                          double err(const ErrorReport&), double slope, const char* label) {
  os << "# " << label << ": log10(h) log10(error)\n";
  for (const auto& row : table.rows)
    os << detail::format_double(std::log10(row.report.h)) << " "
       << detail::format_double(std::log10(err(row.report))) << "\n";
  os << "\n";
  os << "# reference slope " << detail::format_double(slope) << "\n";
  const auto& first = table.rows.front().report;
  const auto& last = table.rows.back().report;
  const double x0 = std::log10(first.h), x1 = std::log10(last.h);
  const double y1 = std::log10(err(last));
  os << detail::format_double(x0) << " " << detail::format_double(y1 + slope * (x0 - x1)) << "\n";
  os << detail::format_double(x1) << " " << detail::format_double(y1) << "\n";
}

/// Writes `table.csv`, `table.md`, or the `plot_*.dat` family into `dir`.
inline void emit_table(const ConvergenceTable& table, const std::string& format,
                       const std::filesystem::path& dir) {
  if (table.rows.empty()) throw std::invalid_argument("emit_table: empty table");
  std::filesystem::create_directories(dir);
  auto open = [&dir](const std::string& name) {
    std::ofstream os(dir / name);
    if (!os) throw std::runtime_error("emit_table: cannot open " + (dir / name).string());
    return os;
  };
  if (format == "csv") {
    auto os = open("table.csv");
    emit_csv(table, os);
  } else if (format == "markdown") {
    auto os = open("table.md");
    emit_markdown(table, os);
  } else if (format == "plotdata") {
    {
      auto os = open("plot_l2T.dat");
      emit_plotdata(table, os, [](const ErrorReport& r) { return r.err_l2_terminal; }, 2.0,
                    "L2(Omega) at T");
    }
    {
      auto os = open("plot_l2Q.dat");
      emit_plotdata(table, os, [](const ErrorReport& r) { return r.err_l2_cylinder; }, 2.0,
                    "L2(Omega_T)");
    }
    {
      auto os = open("plot_h1Q.dat");
      emit_plotdata(table, os, [](const ErrorReport& r) { return r.err_h1_cylinder; }, 1.0,
                    "H1(Omega_T)");
    }
    if (table.has_hnorm) {
      auto os = open("plot_hnorm.dat");
      emit_plotdata(table, os, [](const ErrorReport& r) { return r.err_hnorm.value(); }, 1.0,
                    "h-norm");
    }
  } else {
    throw std::invalid_argument("emit_table: unknown format '" + format + "'");
  }
}

/// Writes the discrete solution as a VTK snapshot.
template <int M>
void emit_solution_vtk(const SpaceTimeMesh<M>& mesh, const DiscreteField<M>& field,
                       const std::string& path) {
  write_vtk<M>(mesh, path, &field.coefficients);
}

/// Runs the refinement sweep of `config` and emits the requested outputs.
inline ConvergenceTable run(const RunConfig& config) {
  config.validate();
  if (example_spatial_dim(config.example_id) == 1)
    return detail::run_impl<2>(config);
  return detail::run_impl<3>(config);
}

}  // namespace stfem

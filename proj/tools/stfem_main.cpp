#include <cstdio>
#include <exception>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stfem/stfem.hpp"

namespace {

// "lo..hi" or a single level.
void parse_levels(const std::string& text, int& lo, int& hi) {
  const auto pos = text.find("..");
  try {
    if (pos == std::string::npos) {
      lo = hi = std::stoi(text);
    } else {
      lo = std::stoi(text.substr(0, pos));
      hi = std::stoi(text.substr(pos + 2));
    }
  } catch (const std::exception&) {
    throw CLI::ValidationError("--levels", "expected <lo>..<hi> or a single integer");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-time finite element solver and convergence studies"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run a refinement sweep for one example");

  int example_id = 0;
  std::string levels = "2..5";
  bool hnorm = false;
  std::string solver_name = "lu";
  std::string precond_name = "ilu0";
  double rel_tol = 1e-10;
  int max_iterations = 20000;
  int restart = 50;
  std::vector<std::string> formats = {"csv"};
  std::string out_dir;
  bool dump_matrix = false;

  run_cmd->set_config("--config", "", "Flat key=value config file; flags override it");
  run_cmd->add_option("--example", example_id, "Example id (1..4)");
  run_cmd->add_option("--levels", levels, "Refinement levels lo..hi, N = 2^level (default 2..5)");
  run_cmd->add_flag("--hnorm", hnorm, "Also report the mesh-dependent error norm");
  run_cmd->add_option("--solver", solver_name, "Linear solver (default lu)")
      ->check(CLI::IsMember({"lu", "gmres"}));
  run_cmd->add_option("--precond", precond_name, "GMRES preconditioner (default ilu0)")
      ->check(CLI::IsMember({"ilu0", "none"}));
  run_cmd->add_option("--tol", rel_tol, "Relative solver tolerance (default 1e-10)");
  run_cmd->add_option("--max-iter", max_iterations, "GMRES iteration budget");
  run_cmd->add_option("--restart", restart, "GMRES restart length (default 50)");
  run_cmd->add_option("--format", formats, "Output formats: csv,markdown,plotdata,vtk")
      ->delimiter(',');
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_flag("--dump-matrix", dump_matrix, "Dump assembled systems in MatrixMarket format");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    stfem::RunConfig config;
    config.example_id = example_id;
    parse_levels(levels, config.level_min, config.level_max);
    config.solver.method =
        (solver_name == "lu") ? stfem::SolverMethod::DirectLU : stfem::SolverMethod::GMRES;
    config.solver.preconditioner = (precond_name == "ilu0") ? stfem::Preconditioner::ILU0
                                                            : stfem::Preconditioner::None;
    config.solver.rel_tol = rel_tol;
    config.solver.max_iterations = max_iterations;
    config.solver.restart = restart;
    config.include_hnorm = hnorm;
    if (out_dir.empty())
      throw std::invalid_argument("--out <dir> is required");
    config.out_dir = out_dir;
    config.formats = std::set<std::string>(formats.begin(), formats.end());
    config.dump_matrix = dump_matrix;
    config.log = &std::cout;

    const stfem::ConvergenceTable table = stfem::run(config);
    stfem::emit_markdown(table, std::cout);
    std::cout << "wrote " << config.out_dir.string() << "\n";
    return 0;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

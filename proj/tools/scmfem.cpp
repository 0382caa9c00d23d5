// Command line driver for the convergence studies.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "scmfem/experiments.hpp"

namespace {

using scmfem::ConvergenceConfig;
using scmfem::ConvergenceRow;

void print_row(const ConvergenceRow& r) {
  if (!r.failure.empty()) {
    fmt::print(stderr, "level {} failed: {}\n", r.level, r.failure);
    return;
  }
  fmt::print(stderr, "level {}  h={:.5f}  dofs={:>8}  error={:.5f}  eoc={}  ({:.0f} ms)\n", r.level, r.h_nominal,
             r.dofs, r.error_l2, r.eoc ? fmt::format("{:.5f}", *r.eoc) : std::string("-"), r.runtime_ms);
}

int run(const ConvergenceConfig& config, const std::string& out_path) {
  const auto rows = scmfem::run_convergence(config, print_row);
  if (out_path.empty()) {
    scmfem::write_csv(std::cout, rows);
  } else {
    std::ofstream out(out_path);
    if (!out) {
      fmt::print(stderr, "cannot open {}\n", out_path);
      return 1;
    }
    scmfem::write_csv(out, rows);
  }
  for (const auto& r : rows) {
    if (!r.failure.empty()) return 2;
  }
  return 0;
}

int table1(int levels, double tol) {
  int status = 0;
  std::vector<std::vector<ConvergenceRow>> columns;
  for (double deg : {270.0, 355.0}) {
    ConvergenceConfig config;
    config.omega = deg * scmfem::pi / 180.0;
    config.levels = levels;
    config.tol = tol;
    fmt::print(stderr, "omega = {} degrees\n", deg);
    columns.push_back(scmfem::run_convergence(config, print_row));
    for (const auto& r : columns.back()) {
      if (!r.failure.empty()) status = 2;
    }
  }
  fmt::print("{:>9} | {:>9} {:>7} | {:>9} {:>7}\n", "h", "270 e_h", "eoc", "355 e_h", "eoc");
  auto cell = [](const std::vector<ConvergenceRow>& col, std::size_t i) {
    if (i >= col.size() || !col[i].failure.empty()) return fmt::format("{:>9} {:>7}", "failed", "");
    const auto& r = col[i];
    return fmt::format("{:>9.5f} {:>7}", r.error_l2, r.eoc ? fmt::format("{:.5f}", *r.eoc) : std::string());
  };
  for (int i = 0; i < levels; ++i) {
    fmt::print("{:>9.5f} | {} | {}\n", std::ldexp(0.25, -i), cell(columns[0], i), cell(columns[1], i));
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual singular complement method for Poisson problems with L2 Dirichlet data"};
  app.require_subcommand(1);

  ConvergenceConfig config;
  double omega_deg = 270.0;
  std::string method = "scm";
  std::string out_path;
  bool full = false;
  auto* run_cmd = app.add_subcommand("run", "Run one convergence study and write CSV");
  run_cmd->add_option("--omega-deg", omega_deg, "Interior angle at the corner in degrees")->capture_default_str();
  run_cmd->add_option("--levels", config.levels, "Number of refinement levels")->capture_default_str();
  run_cmd->add_option("--method", method, "scm or standard")
      ->check(CLI::IsMember({"scm", "standard"}))
      ->capture_default_str();
  run_cmd->add_option("--mu", config.mu, "Boundary grading exponent (default 2 pi/omega - 1)");
  run_cmd->add_option("--grading-radius", config.grading_radius, "Radius of the graded zone")->capture_default_str();
  run_cmd->add_option("--tol", config.tol, "Relative CG tolerance")->capture_default_str();
  run_cmd->add_option("--case", config.case_name, "paper, smooth or zero")
      ->check(CLI::IsMember({"paper", "smooth", "zero"}))
      ->capture_default_str();
  run_cmd->add_option("--out", out_path, "CSV output path (default stdout)");
  run_cmd->add_flag("--full", full, "Use 7 levels");
  run_cmd->add_flag("--alpha-denominator-squared", config.alpha_denominator_squared,
                    "Divide alpha_h by the fourth power of the norm of p_s^h");
  run_cmd->add_option("--mesh-dump", config.mesh_dump_dir, "Directory receiving one mesh file per level");

  int table_levels = 6;
  double table_tol = 1e-12;
  bool table_full = false;
  auto* table_cmd = app.add_subcommand("table1", "Run the 270 and 355 degree studies side by side");
  table_cmd->add_option("--levels", table_levels, "Number of refinement levels")->capture_default_str();
  table_cmd->add_option("--tol", table_tol, "Relative CG tolerance")->capture_default_str();
  table_cmd->add_flag("--full", table_full, "Use 7 levels");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      config.omega = omega_deg * scmfem::pi / 180.0;
      config.method = scmfem::parse_method(method);
      if (full) config.levels = 7;
      return run(config, out_path);
    }
    return table1(table_full ? 7 : table_levels, table_tol);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}

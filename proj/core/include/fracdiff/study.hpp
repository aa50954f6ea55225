#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracdiff/cahn_hilliard.hpp"
#include "fracdiff/problems.hpp"
#include "fracdiff/rates.hpp"

namespace fracdiff {

/// Raised for malformed or inconsistent configuration; the CLI maps it to
/// exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class StudyKind {
  SteadySpatial,    // sweep grid size, error vs exact solution
  SteadySelf,       // sweep grid size, self-convergence u_h vs u_{h/2}
  EvolveSpatial,    // fixed N_t, sweep grid size
  EvolveTemporal,   // fixed grid, sweep N_t
};

struct StudyConfig {
  std::string problem = "smooth-steady";  // smooth-steady | singular-steady |
                                          // stripe-steady | manufactured-evolve
  StudyKind study = StudyKind::SteadySpatial;
  int dim = 3;
  int mode_n = 2;
  Discretization kind = Discretization::Cdm4;
  std::optional<RhsMode> rhs;            // default chosen per discretization
  std::vector<std::pair<double, double>> pairs;  // (s,gamma) or (s,alpha)
  std::vector<int> nx;                   // spatial sweep (interval counts)
  std::vector<int> nt;                   // temporal sweep
  int nx_fixed = 256;
  int nt_fixed = 5000;
  TimeProfile g = TimeProfile::Linear;
  bool max_norm = false;
  int threads = 1;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  ReportFormat format = ReportFormat::Csv;
  bool full_scale = false;

  // single-run parameters (steady/evolve/cahn-hilliard subcommands)
  double s = 0.5, gamma = 0.0, alpha = 0.8, kappa = 1.0;
  int nx_single = 64, nt_single = 100;
  CahnHilliardSpec ch;
  int ch_steps = 500;
  std::vector<double> snapshot_times;

  static StudyConfig from_json_file(const std::string& path);
  static StudyConfig from_json_text(const std::string& text);
};

/// Runs the configured sweep and computes per-row errors and rates. Solver
/// failures are reported per row; completed rows are still emitted.
RateTable run_convergence(const StudyConfig& config);

/// Builds the ProblemSpec selected by the config for given (s, gamma-or-alpha).
ProblemSpec make_problem(const StudyConfig& config, double s, double second);

struct BenchRow {
  std::string what;
  long size = 0;
  long steps = 0;
  double seconds = 0.0;
  double seconds_per_step = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  double dst_scaling_exponent = 0.0;  // fitted slope of log(time) vs log(N)
};

/// Wall-time scaling measurements for the 1D transform and the stepper.
BenchReport run_benchmark(const StudyConfig& config);

void emit_bench_report(const BenchReport& report, ReportFormat format, std::ostream& out);

}  // namespace fracdiff

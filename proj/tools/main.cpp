// Command line driver for the fractional diffusion solver library.
//
// Subcommands: steady, evolve, convergence, cahn-hilliard, bench. Each takes
// --config <json> plus direct overrides. Exit codes: 0 success, 2 config
// error, 3 solver failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fracdiff/snapshot.hpp"
#include "fracdiff/study.hpp"

namespace fd = fracdiff;

namespace {

struct Overrides {
  std::string config_path;
  std::optional<int> nx, nt, threads;
  std::optional<double> s, alpha, gamma;
  std::optional<std::string> kind, out, format;
  std::optional<std::uint64_t> seed;
  bool full_scale = false;
};

void add_common_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--nx", o.nx, "grid intervals per axis");
  cmd->add_option("--nt", o.nt, "number of time steps");
  cmd->add_option("--s", o.s, "fractional power s");
  cmd->add_option("--alpha", o.alpha, "time-fractional order");
  cmd->add_option("--gamma", o.gamma, "reaction shift gamma");
  cmd->add_option("--kind", o.kind, "discretization: fem|cdm4|fd2");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--format", o.format, "report format: csv|json|markdown");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--threads", o.threads, "worker thread count");
  cmd->add_flag("--full-scale", o.full_scale, "use full-size sweeps");
}

fd::StudyConfig load_config(const Overrides& o) {
  fd::StudyConfig c;
  if (!o.config_path.empty()) c = fd::StudyConfig::from_json_file(o.config_path);
  if (const char* env = std::getenv("FRACDIFF_THREADS")) c.threads = std::atoi(env);
  if (const char* env = std::getenv("FRACDIFF_OUT_DIR")) c.out_dir = env;
  if (o.nx) {
    c.nx_single = *o.nx;
    c.ch.intervals = *o.nx;
  }
  if (o.nt) c.nt_single = *o.nt;
  if (o.s) {
    c.s = *o.s;
    c.ch.s = *o.s;
  }
  if (o.alpha) {
    c.alpha = *o.alpha;
    c.ch.alpha = *o.alpha;
  }
  if (o.gamma) c.gamma = *o.gamma;
  if (o.kind) {
    if (*o.kind == "fem")
      c.kind = fd::Discretization::FemLinear;
    else if (*o.kind == "cdm4")
      c.kind = fd::Discretization::Cdm4;
    else if (*o.kind == "fd2")
      c.kind = fd::Discretization::Fd2;
    else
      throw fd::ConfigError("unknown discretization: " + *o.kind);
    c.ch.kind = c.kind;
  }
  if (o.out) c.out_dir = *o.out;
  if (o.format) c.format = fd::parse_format(*o.format);
  if (o.seed) {
    c.seed = *o.seed;
    c.ch.seed = *o.seed;
  }
  if (o.threads) {
    if (*o.threads < 1) throw fd::ConfigError("threads must be >= 1");
    c.threads = *o.threads;
  }
  if (o.full_scale) c.full_scale = true;
  return c;
}

std::string report_extension(fd::ReportFormat f) {
  switch (f) {
    case fd::ReportFormat::Csv: return ".csv";
    case fd::ReportFormat::Json: return ".json";
    case fd::ReportFormat::Markdown: return ".md";
  }
  return ".txt";
}

void fill_default_sweeps(fd::StudyConfig& c) {
  const bool temporal = c.study == fd::StudyKind::EvolveTemporal;
  if (temporal ? !c.nt.empty() : !c.nx.empty()) return;
  switch (c.study) {
    case fd::StudyKind::SteadySpatial:
      c.nx = c.full_scale ? std::vector<int>{8, 16, 32, 64, 128, 256}
                           : std::vector<int>{8, 16, 32, 64};
      break;
    case fd::StudyKind::SteadySelf:
      c.nx = c.full_scale ? std::vector<int>{64, 128, 256, 512, 1024, 2048}
                           : std::vector<int>{64, 128, 256, 512};
      break;
    case fd::StudyKind::EvolveSpatial:
      c.nx = {5, 10, 20, 40};
      break;
    case fd::StudyKind::EvolveTemporal:
      c.nt = {20, 40, 80, 160};
      if (c.full_scale) c.nx_fixed = 500;
      break;
  }
}

std::filesystem::path ensure_out_dir(const fd::StudyConfig& c) {
  std::filesystem::path dir(c.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw fd::ConfigError("cannot create output directory: " + c.out_dir);
  return dir;
}

int run_steady(const fd::StudyConfig& c) {
  fd::StudyConfig cfg = c;
  if (cfg.problem == "manufactured-evolve") throw fd::ConfigError("steady: time-dependent problem");
  const fd::ProblemSpec p = fd::make_problem(cfg, cfg.s, cfg.gamma);
  const fd::Grid grid = p.grid(cfg.nx_single);
  fd::OperatorSpec op{p.kind, p.rhs, p.s, p.gamma, p.kappa};
  fd::DstPlan plan(grid);
  fd::TensorField b = fd::assemble_rhs(grid, p.rhs,
                                       [&](std::array<double, 3> x) { return p.f(x, 0.0); });
  fd::TensorField u = fd::solve_steady(b, grid, op, plan);
  const auto dir = ensure_out_dir(cfg);
  fd::emit_field_snapshot(u, grid, (dir / "steady.csv").string());
  if (p.exact) {
    const double e2 = fd::field_error(u, p, grid, 0.0, false);
    const double emax = fd::field_error(u, p, grid, 0.0, true);
    std::printf("problem=%s nx=%d l2_error=%.6e max_error=%.6e\n", p.name.c_str(),
                cfg.nx_single, e2, emax);
  } else {
    std::printf("problem=%s nx=%d max=%.6e (no exact solution)\n", p.name.c_str(),
                cfg.nx_single, fd::discrete_max_norm(u));
  }
  std::printf("field written to %s\n", (dir / "steady.csv").string().c_str());
  return 0;
}

int run_evolve(const fd::StudyConfig& c, const std::string& load_state,
               const std::string& save_state) {
  fd::StudyConfig cfg = c;
  cfg.problem = "manufactured-evolve";
  const fd::ProblemSpec p = fd::make_problem(cfg, cfg.s, cfg.alpha);
  const fd::Grid grid = p.grid(cfg.nx_single);
  const double dt = p.horizon / cfg.nt_single;
  fd::OperatorSpec op{p.kind, p.rhs, p.s, p.gamma, p.kappa};

  fd::FastL1Stepper stepper = [&] {
    if (!load_state.empty()) {
      std::ifstream in(load_state, std::ios::binary);
      if (!in) throw fd::ConfigError("cannot open state file: " + load_state);
      return fd::FastL1Stepper::load(in);
    }
    fd::FastL1Stepper st(grid, op, cfg.alpha, dt, p.horizon);
    st.set_initial(fd::sample_field(grid, [&](std::array<double, 3> x) { return p.u0(x); }));
    return st;
  }();

  while (stepper.step_index() < cfg.nt_single) {
    const double t = (stepper.step_index() + 1) * stepper.dt();
    stepper.advance(fd::assemble_rhs(stepper.grid(), p.rhs, [&](std::array<double, 3> x) {
      return p.f(x, t);
    }));
  }
  if (!save_state.empty()) {
    std::ofstream out(save_state, std::ios::binary);
    if (!out) throw fd::ConfigError("cannot open state file for writing: " + save_state);
    stepper.save(out);
  }
  const auto dir = ensure_out_dir(cfg);
  fd::emit_field_snapshot(stepper.current(), stepper.grid(), (dir / "evolve.csv").string());
  const double t_final = stepper.step_index() * stepper.dt();
  const double emax = fd::field_error(stepper.current(), p, stepper.grid(), t_final, true);
  std::printf("problem=%s nx=%d nt=%d t=%.6g max_error=%.6e\n", p.name.c_str(),
              stepper.grid().intervals[0], stepper.step_index(), t_final, emax);
  return 0;
}

int run_convergence_cmd(const fd::StudyConfig& c) {
  fd::StudyConfig cfg = c;
  fill_default_sweeps(cfg);
  if (cfg.pairs.empty()) cfg.pairs = {{cfg.s, cfg.gamma}};
  const fd::RateTable table = fd::run_convergence(cfg);
  fd::emit_report(table, cfg.format, std::cout);
  const auto dir = ensure_out_dir(cfg);
  const auto path = dir / (table.problem + "-rates" + report_extension(cfg.format));
  fd::emit_report_file(table, cfg.format, path.string());
  for (const auto& row : table.rows)
    if (!row.ok && !row.note.empty())
      throw std::runtime_error("sweep point failed: " + row.note);
  return 0;
}

int run_cahn_hilliard(const fd::StudyConfig& c) {
  fd::StudyConfig cfg = c;
  std::vector<double> snaps = cfg.snapshot_times;
  if (snaps.empty()) snaps = {0.026, 0.06, 0.16, 0.5};
  const fd::CahnHilliardResult r = fd::cahn_hilliard_run(cfg.ch, cfg.ch_steps, snaps);
  const auto dir = ensure_out_dir(cfg);
  const fd::Grid grid = fd::Grid::unit_box(cfg.ch.dim, cfg.ch.intervals);
  for (const auto& [t, field] : r.snapshots) {
    char name[64];
    std::snprintf(name, sizeof(name), "cahn-hilliard-t%.4g.csv", t);
    fd::emit_field_snapshot(field, grid, (dir / name).string());
  }
  fd::emit_field_snapshot(r.final_field, grid, (dir / "cahn-hilliard-final.csv").string());
  std::printf("steps=%d max_abs=%.6e final_max=%.6e\n", r.steps, r.max_abs,
              fd::discrete_max_norm(r.final_field));
  return 0;
}

int run_bench(const fd::StudyConfig& c) {
  const fd::BenchReport report = fd::run_benchmark(c);
  fd::emit_bench_report(report, c.format, std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix-free solver for time-space fractional diffusion"};
  app.require_subcommand(1);

  Overrides o_steady, o_evolve, o_conv, o_ch, o_bench;
  std::string load_state, save_state;

  CLI::App* steady = app.add_subcommand("steady", "solve one steady problem");
  add_common_options(steady, o_steady);
  CLI::App* evolve = app.add_subcommand("evolve", "run the fast time stepper");
  add_common_options(evolve, o_evolve);
  evolve->add_option("--load-state", load_state, "resume from a binary state file");
  evolve->add_option("--save-state", save_state, "write final stepper state");
  CLI::App* conv = app.add_subcommand("convergence", "error/rate sweep");
  add_common_options(conv, o_conv);
  CLI::App* ch = app.add_subcommand("cahn-hilliard", "fractional phase-field run");
  add_common_options(ch, o_ch);
  CLI::App* bench = app.add_subcommand("bench", "wall-time scaling report");
  add_common_options(bench, o_bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (steady->parsed()) return run_steady(load_config(o_steady));
    if (evolve->parsed()) return run_evolve(load_config(o_evolve), load_state, save_state);
    if (conv->parsed()) return run_convergence_cmd(load_config(o_conv));
    if (ch->parsed()) return run_cahn_hilliard(load_config(o_ch));
    if (bench->parsed()) return run_bench(load_config(o_bench));
  } catch (const fd::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 3;
  }
  return 0;
}

#include "fracdiff/study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace fracdiff {

namespace {

using nlohmann::json;

Discretization parse_kind(const std::string& name) {
  if (name == "fem") return Discretization::FemLinear;
  if (name == "cdm4") return Discretization::Cdm4;
  if (name == "fd2") return Discretization::Fd2;
  throw ConfigError("unknown discretization: " + name + " (expected fem|cdm4|fd2)");
}

RhsMode parse_rhs(const std::string& name) {
  if (name == "nodal") return RhsMode::Nodal;
  if (name == "load-lumped") return RhsMode::LoadLumped;
  if (name == "load-gauss") return RhsMode::LoadGauss;
  throw ConfigError("unknown rhs mode: " + name + " (expected nodal|load-lumped|load-gauss)");
}

StudyKind parse_study(const std::string& name) {
  if (name == "steady-spatial") return StudyKind::SteadySpatial;
  if (name == "steady-self") return StudyKind::SteadySelf;
  if (name == "evolve-spatial") return StudyKind::EvolveSpatial;
  if (name == "evolve-temporal") return StudyKind::EvolveTemporal;
  throw ConfigError("unknown study kind: " + name);
}

TimeProfile parse_profile(const std::string& name) {
  if (name == "linear") return TimeProfile::Linear;
  if (name == "power15") return TimeProfile::Power15;
  throw ConfigError("unknown time profile: " + name + " (expected linear|power15)");
}

std::string pair_label(double a, double b) {
  std::ostringstream os;
  os << '(' << a << ',' << b << ')';
  return os.str();
}

// Restriction of a field on the doubled grid to the coarse interior nodes
// (every other fine node coincides with a coarse node).
TensorField restrict_to_coarse(const TensorField& fine, const Grid& coarse) {
  TensorField out(coarse);
  const auto cshape = out.shape();
  const auto fshape = fine.shape();
  for (int k = 0; k < coarse.dim; ++k)
    if (fshape[k] != 2 * cshape[k] + 1)
      throw std::invalid_argument("restrict_to_coarse: grids are not nested 2:1");
  std::array<int, 3> idx{0, 0, 0};
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    std::array<int, 3> fidx{0, 0, 0};
    for (int k = 0; k < coarse.dim; ++k) fidx[k] = 2 * idx[k] + 1;
    out[flat] = fine[fine.offset(fidx)];
    for (int k = coarse.dim - 1; k >= 0; --k) {
      if (++idx[k] < cshape[k]) break;
      idx[k] = 0;
    }
  }
  return out;
}

TensorField solve_steady_problem(const ProblemSpec& p, const Grid& grid) {
  OperatorSpec op{p.kind, p.rhs, p.s, p.gamma, p.kappa};
  DstPlan plan(grid);
  TensorField b = assemble_rhs(grid, p.rhs,
                               [&](std::array<double, 3> x) { return p.f(x, 0.0); });
  return solve_steady(b, grid, op, plan);
}

double norm_of(const TensorField& e, bool max_norm) {
  return max_norm ? discrete_max_norm(e) : discrete_l2_norm(e);
}

template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  threads = std::clamp(threads, 1, n > 0 ? n : 1);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::future<void>> workers;
  workers.reserve(threads);
  for (int t = 0; t < threads; ++t)
    workers.push_back(std::async(std::launch::async, [&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    }));
  for (auto& w : workers) w.get();
}

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) throw ConfigError("unknown config key" + (where.empty() ? "" : " in " + where) +
                                  ": " + it.key());
  }
}

}  // namespace

StudyConfig StudyConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

StudyConfig StudyConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  require_keys(j,
               {"problem", "study", "dim", "mode_n", "kind", "rhs", "pairs", "nx", "nt",
                "nx_fixed", "nt_fixed", "g", "max_norm", "threads", "seed", "out_dir",
                "format", "full_scale", "s", "gamma", "alpha", "kappa", "nx_single",
                "nt_single", "ch", "ch_steps", "snapshot_times"},
               "");

  StudyConfig c;
  try {
    if (j.contains("problem")) c.problem = j.at("problem").get<std::string>();
    if (j.contains("study")) c.study = parse_study(j.at("study").get<std::string>());
    if (j.contains("dim")) c.dim = j.at("dim").get<int>();
    if (j.contains("mode_n")) c.mode_n = j.at("mode_n").get<int>();
    if (j.contains("kind")) c.kind = parse_kind(j.at("kind").get<std::string>());
    if (j.contains("rhs")) c.rhs = parse_rhs(j.at("rhs").get<std::string>());
    if (j.contains("pairs")) {
      c.pairs.clear();
      for (const auto& p : j.at("pairs")) {
        if (!p.is_array() || p.size() != 2)
          throw ConfigError("pairs entries must be two-element arrays");
        c.pairs.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      }
    }
    if (j.contains("nx")) c.nx = j.at("nx").get<std::vector<int>>();
    if (j.contains("nt")) c.nt = j.at("nt").get<std::vector<int>>();
    if (j.contains("nx_fixed")) c.nx_fixed = j.at("nx_fixed").get<int>();
    if (j.contains("nt_fixed")) c.nt_fixed = j.at("nt_fixed").get<int>();
    if (j.contains("g")) c.g = parse_profile(j.at("g").get<std::string>());
    if (j.contains("max_norm")) c.max_norm = j.at("max_norm").get<bool>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("format")) c.format = parse_format(j.at("format").get<std::string>());
    if (j.contains("full_scale")) c.full_scale = j.at("full_scale").get<bool>();
    if (j.contains("s")) c.s = j.at("s").get<double>();
    if (j.contains("gamma")) c.gamma = j.at("gamma").get<double>();
    if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
    if (j.contains("kappa")) c.kappa = j.at("kappa").get<double>();
    if (j.contains("nx_single")) c.nx_single = j.at("nx_single").get<int>();
    if (j.contains("nt_single")) c.nt_single = j.at("nt_single").get<int>();
    if (j.contains("ch_steps")) c.ch_steps = j.at("ch_steps").get<int>();
    if (j.contains("snapshot_times"))
      c.snapshot_times = j.at("snapshot_times").get<std::vector<double>>();
    if (j.contains("ch")) {
      const json& h = j.at("ch");
      require_keys(h, {"dim", "intervals", "kind", "eps", "s", "beta", "alpha", "dt", "seed"},
                   "ch");
      if (h.contains("dim")) c.ch.dim = h.at("dim").get<int>();
      if (h.contains("intervals")) c.ch.intervals = h.at("intervals").get<int>();
      if (h.contains("kind")) c.ch.kind = parse_kind(h.at("kind").get<std::string>());
      if (h.contains("eps")) c.ch.eps = h.at("eps").get<double>();
      if (h.contains("s")) c.ch.s = h.at("s").get<double>();
      if (h.contains("beta")) c.ch.beta = h.at("beta").get<double>();
      if (h.contains("alpha")) c.ch.alpha = h.at("alpha").get<double>();
      if (h.contains("dt")) c.ch.dt = h.at("dt").get<double>();
      if (h.contains("seed")) c.ch.seed = h.at("seed").get<std::uint64_t>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config value: ") + e.what());
  }

  if (c.dim < 1 || c.dim > 3) throw ConfigError("dim must be 1, 2 or 3");
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  if (c.alpha <= 0.0 || c.alpha >= 1.0) throw ConfigError("alpha must lie in (0,1)");
  if (c.s <= 0.0) throw ConfigError("s must be positive");
  for (int n : c.nx)
    if (n < 2) throw ConfigError("nx entries must be >= 2");
  for (int n : c.nt)
    if (n < 1) throw ConfigError("nt entries must be >= 1");
  return c;
}

ProblemSpec make_problem(const StudyConfig& config, double s, double second) {
  ProblemSpec p;
  if (config.problem == "smooth-steady") {
    p = example_smooth_steady(config.dim, config.mode_n, s, second, config.kind);
  } else if (config.problem == "singular-steady") {
    p = example_singular_steady(config.kind, s);
  } else if (config.problem == "stripe-steady") {
    p = example_stripe_steady(s);
  } else if (config.problem == "manufactured-evolve") {
    p = example_manufactured_evolve(config.g, s, second, config.kind);
  } else {
    throw ConfigError("unknown problem: " + config.problem);
  }
  if (config.rhs) p.rhs = *config.rhs;
  return p;
}

RateTable run_convergence(const StudyConfig& config) {
  RateTable table;
  table.problem = config.problem;
  table.norm = config.max_norm ? "max" : "l2";

  const bool temporal = config.study == StudyKind::EvolveTemporal;
  const std::vector<int>& sweep = temporal ? config.nt : config.nx;
  if (sweep.empty()) throw ConfigError("empty sweep: set nx or nt for the chosen study");
  if (config.pairs.empty()) throw ConfigError("no parameter pairs configured");

  const int n_rows_per_pair =
      (config.study == StudyKind::SteadySelf) ? static_cast<int>(sweep.size()) - 1
                                              : static_cast<int>(sweep.size());
  if (n_rows_per_pair < 1) throw ConfigError("self-convergence needs at least two grid sizes");

  for (const auto& [s, second] : config.pairs) {
    const ProblemSpec problem = make_problem(config, s, second);
    std::vector<double> errors(n_rows_per_pair,
                               std::numeric_limits<double>::quiet_NaN());
    std::vector<std::string> notes(n_rows_per_pair);

    if (config.study == StudyKind::SteadySelf) {
      // one solve per level, shared between adjacent error rows
      std::vector<TensorField> solutions(sweep.size(), TensorField(1, {1, 1, 1}, {1, 1, 1}));
      std::vector<std::string> level_notes(sweep.size());
      parallel_for(static_cast<int>(sweep.size()), config.threads, [&](int i) {
        try {
          solutions[i] = solve_steady_problem(problem, problem.grid(sweep[i]));
        } catch (const std::exception& e) {
          level_notes[i] = e.what();
        }
      });
      for (int i = 0; i < n_rows_per_pair; ++i) {
        if (!level_notes[i].empty() || !level_notes[i + 1].empty()) {
          notes[i] = !level_notes[i].empty() ? level_notes[i] : level_notes[i + 1];
          continue;
        }
        if (sweep[i + 1] != 2 * sweep[i]) {
          notes[i] = "self-convergence requires doubled grids";
          continue;
        }
        const Grid coarse = problem.grid(sweep[i]);
        TensorField diff = restrict_to_coarse(solutions[i + 1], coarse);
        diff -= solutions[i];
        errors[i] = norm_of(diff, config.max_norm);
      }
    } else {
      parallel_for(n_rows_per_pair, config.threads, [&](int i) {
        try {
          if (config.study == StudyKind::SteadySpatial) {
            const Grid grid = problem.grid(sweep[i]);
            TensorField u = solve_steady_problem(problem, grid);
            errors[i] = field_error(u, problem, grid, 0.0, config.max_norm);
          } else if (config.study == StudyKind::EvolveSpatial) {
            const Grid grid = problem.grid(sweep[i]);
            const double dt = problem.horizon / config.nt_fixed;
            EvolveResult r = run_evolution(problem, grid, dt, config.nt_fixed);
            errors[i] = field_error(r.final_field, problem, grid, problem.horizon,
                                    config.max_norm);
          } else {  // EvolveTemporal
            const Grid grid = problem.grid(config.nx_fixed);
            const double dt = problem.horizon / sweep[i];
            EvolveResult r = run_evolution(problem, grid, dt, sweep[i]);
            errors[i] = field_error(r.final_field, problem, grid, problem.horizon,
                                    config.max_norm);
          }
        } catch (const std::exception& e) {
          notes[i] = e.what();
        }
      });
    }

    const std::vector<double> rates = compute_rates(errors);
    for (int i = 0; i < n_rows_per_pair; ++i) {
      RateRow row;
      row.label = pair_label(s, second);
      row.sweep = sweep[i];
      row.error = errors[i];
      row.rate = rates[i];
      row.ok = notes[i].empty() && std::isfinite(errors[i]);
      row.note = notes[i];
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

BenchReport run_benchmark(const StudyConfig& config) {
  BenchReport report;
  auto now = [] { return std::chrono::steady_clock::now(); };
  auto secs = [](auto a, auto b) { return std::chrono::duration<double>(b - a).count(); };

  std::vector<int> sizes = config.nx;
  if (sizes.empty()) sizes = {256, 512, 1024, 2048, 4096};
  std::vector<double> logn, logt;
  for (int n : sizes) {
    Grid grid = Grid::unit_box(1, n);
    DstPlan plan(grid);
    TensorField u(grid);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::sin(0.37 * (i + 1));
    // warm up once, then time enough repetitions to be measurable
    TensorField v = plan.forward(u);
    const int reps = std::max(4, 1 << std::max(0, 22 - static_cast<int>(std::log2(n)) * 2));
    const auto t0 = now();
    for (int r = 0; r < reps; ++r) v = plan.forward(u);
    const double t = secs(t0, now());
    report.rows.push_back({"dst-1d", n, reps, t, t / reps});
    logn.push_back(std::log(static_cast<double>(n)));
    logt.push_back(std::log(t / reps));
  }
  double mn = 0.0, mt = 0.0;
  for (std::size_t i = 0; i < logn.size(); ++i) {
    mn += logn[i];
    mt += logt[i];
  }
  mn /= logn.size();
  mt /= logt.size();
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < logn.size(); ++i) {
    cov += (logn[i] - mn) * (logt[i] - mt);
    var += (logn[i] - mn) * (logn[i] - mn);
  }
  report.dst_scaling_exponent = cov / var;

  // stepper cost per step at a fixed 2D size
  {
    ProblemSpec p = example_manufactured_evolve(TimeProfile::Linear, config.s, config.alpha);
    const Grid grid = p.grid(config.nx_single);
    const double dt = p.horizon / config.nt_single;
    EvolveResult r = run_evolution(p, grid, dt, config.nt_single);
    report.rows.push_back({"fast-l1-step-2d", config.nx_single, r.steps,
                           r.seconds_per_step * r.steps, r.seconds_per_step});
  }
  return report;
}

void emit_bench_report(const BenchReport& report, ReportFormat format, std::ostream& out) {
  char buf[64];
  switch (format) {
    case ReportFormat::Csv:
      out << "what,size,steps,seconds,seconds_per_step\n";
      for (const auto& r : report.rows) {
        std::snprintf(buf, sizeof(buf), "%.6e,%.6e", r.seconds, r.seconds_per_step);
        out << r.what << ',' << r.size << ',' << r.steps << ',' << buf << '\n';
      }
      std::snprintf(buf, sizeof(buf), "%.3f", report.dst_scaling_exponent);
      out << "dst_scaling_exponent,,,," << buf << '\n';
      break;
    case ReportFormat::Json:
      out << "{\n  \"rows\": [\n";
      for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& r = report.rows[i];
        std::snprintf(buf, sizeof(buf), "%.6e, \"seconds_per_step\": %.6e", r.seconds,
                      r.seconds_per_step);
        out << "    {\"what\": \"" << r.what << "\", \"size\": " << r.size
            << ", \"steps\": " << r.steps << ", \"seconds\": " << buf << "}"
            << (i + 1 < report.rows.size() ? "," : "") << '\n';
      }
      std::snprintf(buf, sizeof(buf), "%.3f", report.dst_scaling_exponent);
      out << "  ],\n  \"dst_scaling_exponent\": " << buf << "\n}\n";
      break;
    case ReportFormat::Markdown:
      out << "| what | size | steps | seconds | s/step |\n"
          << "| --- | ---: | ---: | ---: | ---: |\n";
      for (const auto& r : report.rows) {
        std::snprintf(buf, sizeof(buf), "%.6e | %.6e", r.seconds, r.seconds_per_step);
        out << "| " << r.what << " | " << r.size << " | " << r.steps << " | " << buf
            << " |\n";
      }
      std::snprintf(buf, sizeof(buf), "%.3f", report.dst_scaling_exponent);
      out << "\ndst scaling exponent: " << buf << "\n";
      break;
  }
}

}  // namespace fracdiff

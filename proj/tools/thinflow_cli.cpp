#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "thinflow/error.hpp"
#include "thinflow/harness/acceptance.hpp"
#include "thinflow/harness/config.hpp"
#include "thinflow/harness/experiment.hpp"
#include "thinflow/harness/export.hpp"
#include "thinflow/jump.hpp"

using namespace thinflow;
namespace fs = std::filesystem;

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Options {
  std::string config_path;
  std::string out_dir;
  std::string eps_text;
  std::optional<double> dt;
  std::string grid_text = "41,41";
  double time = 0.0;
  std::vector<int> only;
};

// Tracks named assertions and prints one line per assertion.
struct Assertions {
  bool all = true;
  void check(bool ok, const std::string& what) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
    all = all && ok;
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::vector<double> parse_eps_list(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--eps", "cannot parse '" + item + "'");
    }
  }
  if (v.empty()) throw ConfigError("--eps", "empty sweep");
  return v;
}

RunConfig load(const Options& o) {
  RunConfig cfg = o.config_path.empty() ? default_config() : load_config(o.config_path);
  if (!o.out_dir.empty()) cfg.output = o.out_dir;
  if (o.dt) cfg.sweep.dt = *o.dt;
  return cfg;
}

// Single-map commands take one eps value; 0 selects the base map.
RunConfig load_single(const Options& o) {
  RunConfig cfg = load(o);
  if (!o.eps_text.empty()) {
    const auto v = parse_eps_list(o.eps_text);
    if (v.size() != 1) throw ConfigError("--eps", "expected a single value for this command");
    if (v[0] < 0.0) throw ConfigError("--eps", "must be nonnegative");
    cfg.map.eps = v[0];
  }
  cfg.validate();
  return cfg;
}

// State of the configured flow on map at time t (t = 0 is the discretized initial data).
VelocityEvaluator state_at(const RunConfig& cfg, const MapPtr& map, double t) {
  cfg.vorticity.validate_support(*map);
  const VorticitySample s = discretize(cfg.vorticity, cfg.h, cfg.delta);
  if (t <= 0.0) return {map, s, cfg.gamma + s.total_strength()};
  const Trajectory tr = run(FlowConfig{cfg.gamma, s}, map, t, cfg.sweep.dt);
  return tr.evaluator(tr.times.size() - 1);
}

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  out << text;
}

int cmd_simulate(const Options& o) {
  const RunConfig cfg = load_single(o);
  const MapPtr map = cfg.map.build();
  cfg.vorticity.validate_support(*map);
  const VorticitySample s = discretize(cfg.vorticity, cfg.h, cfg.delta);
  const Trajectory tr = run(FlowConfig{cfg.gamma, s}, map, cfg.sweep.T, cfg.sweep.dt);
  const std::string hash = config_hash(cfg);

  Table traj;
  traj.columns = {"t", "particle", "x", "y", "strength"};
  for (double t : cfg.sweep.snapshots) {
    const std::size_t k = snapshot_index(tr, t);
    for (std::size_t i = 0; i < tr.strengths.size(); ++i)
      traj.add({format_double(tr.times[k]), std::to_string(i), format_double(tr.positions[k][i].x),
                format_double(tr.positions[k][i].y), format_double(tr.strengths[i])});
  }
  Table cons;
  append_conservation(cons, "simulate", cfg.map.eps, tr);
  fs::create_directories(cfg.output);
  traj.write(fs::path(cfg.output) / "trajectory.csv", hash);
  cons.write(fs::path(cfg.output) / "conservation.csv", hash);

  const ConservationReport rep = conservation_report(tr, s.strengths);
  std::printf("simulate: %zu particles, eps %s, T %s, dt %s, hash %s\n", s.size(), format_double(cfg.map.eps).c_str(),
              format_double(cfg.sweep.T).c_str(), format_double(cfg.sweep.dt).c_str(), hash.c_str());
  Assertions a;
  a.check(rep.strengths_identical, "strengths carried unchanged");
  a.check(rep.drift_free(), "total, L1 and Linf of the strengths drift-free (max drift " +
                                num(std::max({rep.max_total_drift, rep.max_l1_drift, rep.max_linf_drift})) + ")");
  a.check(rep.max_envelope_excess <= 0.0,
          "support inside the growth envelope (excess " + num(rep.max_envelope_excess) + ")");
  return a.all ? 0 : kExitFailed;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

int cmd_sweep(const Options& o) {
  RunConfig cfg = load(o);
  if (!o.eps_text.empty()) cfg.sweep.eps = parse_eps_list(o.eps_text);
  cfg.validate();
  ExperimentArtifacts art;
  const ResultBundle b = run_experiment(cfg, true, &art);
  std::printf("sweep: %zu eps runs + 1 limit run, written to %s, hash %s\n", art.eps_runs.size(), cfg.output.c_str(),
              b.config_hash.c_str());

  Assertions a;
  bool conserved = conservation_report(art.limit, art.limit.strengths).drift_free();
  for (const auto& r : art.eps_runs) conserved = conserved && conservation_report(r, r.strengths).drift_free();
  a.check(conserved, "strength statistics drift-free in every run");
  std::vector<double> flux;
  for (const auto& m : b.metrics) flux.push_back(m.flux);
  a.check(strictly_decreasing(flux), "flux norm decreases with eps");
  for (std::size_t s = 0; s < cfg.sweep.snapshots.size(); ++s) {
    std::vector<double> l2;
    std::string list;
    for (const auto& m : b.metrics) {
      l2.push_back(m.l2_error[s]);
      list += num(m.l2_error[s]) + " ";
    }
    a.check(strictly_decreasing(l2), "L2loc error decreases with eps at t=" + format_double(cfg.sweep.snapshots[s]) +
                                         ": " + list);
  }
  return a.all ? 0 : kExitFailed;
}

int cmd_jump(const Options& o) {
  const RunConfig cfg = load_single(o);
  if (cfg.map.eps > 0.0) throw ConfigError("--eps", "the jump lives on the limit slit; use eps 0");
  const MapPtr map = cfg.map.build_base();
  if (!map->has_slit()) throw ConfigError("map", "jump needs a slit map");
  const VelocityEvaluator ev = state_at(cfg, map, o.time);
  const JumpDensity jd = sample_jump_density(ev);
  const std::string hash = config_hash(cfg);

  Table t;
  t.columns = {"s", "g", "endpoint_fit_window_flag"};
  bool finite = true;
  for (const auto& p : jd.samples) {
    finite = finite && std::isfinite(p.g);
    t.add({format_double(p.s), format_double(p.g), p.in_fit_window ? "1" : "0"});
  }
  const double jm = jump_mass(ev);
  const double vm = vorticity_mass(ev);
  const double alpha = ev.alpha();
  const nlohmann::json summary = {{"config_hash", hash},
                                  {"time", o.time},
                                  {"endpoint_coefficients", {{"minus", jd.endpoint_coeffs[0]}, {"plus", jd.endpoint_coeffs[1]}}},
                                  {"jump_mass", jm},
                                  {"vorticity_mass", vm},
                                  {"alpha", alpha}};
  fs::create_directories(cfg.output);
  t.write(fs::path(cfg.output) / "jump.csv", hash);
  write_text(fs::path(cfg.output) / "jump.json", summary.dump(2) + "\n");

  std::printf("jump: t %s, endpoint coefficients %s %s, hash %s\n", format_double(o.time).c_str(),
              num(jd.endpoint_coeffs[0]).c_str(), num(jd.endpoint_coeffs[1]).c_str(), hash.c_str());
  Assertions a;
  a.check(finite, "jump density finite at every sample");
  const double balance = std::abs(jm + vm - alpha);
  a.check(balance <= 1e-6 * std::max(1.0, std::abs(alpha)),
          "jump mass + vorticity mass = alpha (error " + num(balance) + ")");
  return a.all ? 0 : kExitFailed;
}

int cmd_checks(const Options& o) {
  RunConfig cfg = load(o);
  if (!o.eps_text.empty()) cfg.sweep.eps = parse_eps_list(o.eps_text);
  AcceptanceOptions opts;
  opts.config = cfg;
  for (int id : o.only) {
    if (id < 1 || id > kCriterionCount) throw ConfigError("--only", "criterion ids run from 1 to " + std::to_string(kCriterionCount));
    opts.only.insert(id);
  }
  int failed = 0;
  run_acceptance(opts, [&](const CriterionResult& r) {
    std::printf("%s\n", format_result(r).c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  });
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : kExitFailed;
}

int cmd_export(const Options& o) {
  const RunConfig cfg = load_single(o);
  const MapPtr map = cfg.map.build();
  const VelocityEvaluator ev = state_at(cfg, map, o.time);
  const GridSpec grid = parse_grid(o.grid_text);
  std::optional<CutoffField> cutoff;
  if (map->epsilon() > 0.0) cutoff.emplace(map);
  const Table t = export_field(ev, grid, cutoff ? &*cutoff : nullptr);
  const std::string hash = config_hash(cfg);
  fs::create_directories(cfg.output);
  t.write(fs::path(cfg.output) / "field.csv", hash);

  std::size_t skipped = 0;
  bool finite = true;
  for (const auto& r : t.rows) {
    if (r[6] == "1") {
      ++skipped;
      continue;
    }
    for (std::size_t c = 0; c < 6; ++c) finite = finite && std::isfinite(std::stod(r[c]));
  }
  std::printf("export: %zu rows (%zu skipped) to %s, hash %s\n", t.rows.size(), skipped,
              (fs::path(cfg.output) / "field.csv").string().c_str(), hash.c_str());
  Assertions a;
  a.check(t.rows.size() == grid.nx * grid.ny, "one row per grid point");
  a.check(finite, "exported values finite");
  return a.all ? 0 : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vortex-blob flows past thin obstacles and their eps -> 0 limits"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_path, "JSON run configuration (default: built-in)");
  app.add_option("--out", o.out_dir, "Output directory (overrides the config)");
  app.add_option("--eps", o.eps_text, "eps value, or comma list for sweep/checks");
  app.add_option("--dt", o.dt, "Time step (overrides the config)")->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand("simulate", "Run one flow and write trajectory and conservation tables");
  auto* sweep = app.add_subcommand("sweep", "Run the eps sweep and write every table");
  auto* jump = app.add_subcommand("jump", "Sample the jump density on the slit");
  auto* checks = app.add_subcommand("checks", "Run the acceptance criteria");
  auto* exporter = app.add_subcommand("export", "Export the velocity field on a grid");
  for (auto* sub : {jump, exporter})
    sub->add_option("--time", o.time, "Evaluate the flow at this time")->check(CLI::NonNegativeNumber);
  exporter->add_option("--grid", o.grid_text, "nx,ny or nx,ny,xmin,xmax,ymin,ymax");
  checks->add_option("--only", o.only, "Criterion ids to run")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return cmd_simulate(o);
    if (*sweep) return cmd_sweep(o);
    if (*jump) return cmd_jump(o);
    if (*checks) return cmd_checks(o);
    if (*exporter) return cmd_export(o);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitConfig;
}

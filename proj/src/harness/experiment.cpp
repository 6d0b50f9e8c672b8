#include "thinflow/harness/experiment.hpp"

#include <cmath>
#include <fstream>

#include "thinflow/error.hpp"
#include "thinflow/fit.hpp"

namespace thinflow {

using nlohmann::json;

namespace {

const char* kVersion = "1.0.0";

// Fixed moment test functions, supported near the initial vorticity.
std::vector<SpatialTest> moment_tests(const InitialVorticity& iv) {
  std::vector<SpatialTest> out;
  for (const auto& b : iv.bumps) {
    out.push_back({b.center, 2.0 * b.radius, false});
    out.push_back({b.center + Vec2{0.5 * b.radius, 0.0}, 1.5 * b.radius, false});
  }
  return out;
}

Trajectory guarded_run(const RunConfig& cfg, const VorticitySample& sample, MapPtr map, const std::string& label) {
  try {
    return run(FlowConfig{cfg.gamma, sample}, std::move(map), cfg.sweep.T, cfg.sweep.dt);
  } catch (const Error& e) {
    throw Error(label + ": " + e.what());
  }
}

json fit_json(const std::vector<std::pair<double, double>>& series) {
  try {
    const ExponentFit f = fit_exponent(series);
    return {{"exponent", f.exponent}, {"stderr", f.stderr_}};
  } catch (const DomainError& e) {
    return {{"error", e.what()}};
  }
}

}  // namespace

std::size_t snapshot_index(const Trajectory& traj, double t) {
  for (std::size_t k = 0; k < traj.times.size(); ++k)
    if (std::abs(traj.times[k] - t) <= 1e-9 * std::max(1.0, t)) return k;
  throw DomainError("snapshot time " + format_double(t) + " not recorded");
}

void append_conservation(Table& table, const std::string& run, double eps, const Trajectory& traj) {
  if (table.columns.empty())
    table.columns = {"run", "eps", "t", "total_strength", "l1", "linf", "support_radius", "max_speed", "growth_rate",
                     "min_modulus"};
  for (const auto& d : traj.diagnostics)
    table.add({run, format_double(eps), format_double(d.time), format_double(d.total_strength), format_double(d.l1),
               format_double(d.linf), format_double(d.support_radius), format_double(d.max_speed),
               format_double(d.growth_rate), format_double(d.min_modulus)});
}

ResultBundle run_experiment(const RunConfig& cfg, bool write, ExperimentArtifacts* artifacts) {
  cfg.validate();
  EpsilonSweep{cfg.sweep.eps}.validate();
  if (cfg.map.eps > 0.0) throw ConfigError("map", "sweeps need a base map, not an epsilon map");
  ResultBundle bundle;
  bundle.config_hash = config_hash(cfg);

  const MapPtr base = cfg.map.build_base();
  cfg.vorticity.validate_support(*base);
  for (double eps : cfg.sweep.eps) cfg.vorticity.validate_support(*epsilon_map(base, eps));
  const VorticitySample sample = discretize(cfg.vorticity, cfg.h, cfg.delta);

  Trajectory limit = guarded_run(cfg, sample, base, "limit run");
  std::vector<Trajectory> runs;
  for (std::size_t i = 0; i < cfg.sweep.eps.size(); ++i)
    runs.push_back(guarded_run(cfg, sample, epsilon_map(base, cfg.sweep.eps[i]),
                               "run " + std::to_string(i) + " (eps=" + format_double(cfg.sweep.eps[i]) + ")"));

  append_conservation(bundle.conservation, "limit", 0.0, limit);
  for (std::size_t i = 0; i < runs.size(); ++i)
    append_conservation(bundle.conservation, std::to_string(i), cfg.sweep.eps[i], runs[i]);

  bundle.convergence.columns = {"eps", "t", "l2_error", "flux_norm", "extension", "transition_measure", "moment_rate"};
  const auto tests = moment_tests(cfg.vorticity);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    SweepMetrics m;
    m.eps = cfg.sweep.eps[i];
    const CutoffField cut(runs[i].map);
    m.measure = transition_measure(cut, cfg.quadrature);
    for (const auto& psi : tests) m.moment_rate = std::max(m.moment_rate, moment_rate(runs[i], cut, psi));
    m.support_radius = runs[i].diagnostics.back().support_radius;
    for (double t : cfg.sweep.snapshots) {
      const auto k = snapshot_index(runs[i], t);
      const auto eps_ev = runs[i].evaluator(k);
      const auto lim_ev = limit.evaluator(snapshot_index(limit, t));
      const double l2 = l2loc_velocity_error(eps_ev, lim_ev, cfg.sweep.R, cfg.quadrature);
      const double flux = flux_norm(eps_ev, cut, cfg.quadrature);
      const double ext = extension_consistency(eps_ev, cfg.quadrature);
      if (t == cfg.sweep.snapshots.front()) {
        m.flux = flux;
        m.extension = ext;
      }
      m.l2_error.push_back(l2);
      bundle.convergence.add({format_double(m.eps), format_double(t), format_double(l2), format_double(flux),
                              format_double(ext), format_double(m.measure), format_double(m.moment_rate)});
    }
    bundle.metrics.push_back(m);
  }

  bundle.family.columns = {"eps", "sup_distance", "sup_formula", "inverse_det_sup", "l3_distance", "growth_constant"};
  for (const auto& r : family_report(cfg.sweep.eps, base, cfg.sweep.R, cfg.quadrature))
    bundle.family.add({format_double(r.eps), format_double(r.sup_distance), format_double(r.sup_formula),
                       format_double(r.inverse_det_sup), format_double(r.l3_distance), format_double(r.growth_constant)});

  bundle.jump.columns = {"s", "g", "endpoint_fit_window_flag"};
  json endpoint = nullptr;
  if (base->has_slit()) {
    const JumpDensity jd = sample_jump_density(limit.evaluator(0));
    for (const auto& p : jd.samples)
      bundle.jump.add({format_double(p.s), format_double(p.g), p.in_fit_window ? "1" : "0"});
    endpoint = {{"minus", jd.endpoint_coeffs[0]}, {"plus", jd.endpoint_coeffs[1]}};
  }

  std::vector<std::pair<double, double>> flux, ext, meas;
  for (const auto& m : bundle.metrics) {
    if (m.flux > 0.0) flux.push_back({m.eps, m.flux});
    if (m.extension > 0.0) ext.push_back({m.eps, m.extension});
    meas.push_back({m.eps, m.measure});
  }
  bundle.fits = {{"flux_norm", fit_json(flux)},
                 {"extension", fit_json(ext)},
                 {"transition_measure", fit_json(meas)},
                 {"endpoint_coefficients", endpoint}};
  json l2 = json::object();
  for (std::size_t s = 0; s < cfg.sweep.snapshots.size(); ++s) {
    std::vector<std::pair<double, double>> series;
    for (const auto& m : bundle.metrics) series.push_back({m.eps, m.l2_error[s]});
    l2[format_double(cfg.sweep.snapshots[s])] = fit_json(series);
  }
  bundle.fits["l2_error"] = l2;

  bundle.metadata = {{"config_hash", bundle.config_hash},
                     {"version", kVersion},
                     {"particles", sample.size()},
                     {"runs", runs.size() + 1},
                     {"config", cfg.to_json()}};
  if (write) bundle.write(cfg.output);
  if (artifacts) *artifacts = {std::move(limit), std::move(runs)};
  return bundle;
}

void ResultBundle::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  conservation.write(dir / "conservation.csv", config_hash);
  convergence.write(dir / "convergence.csv", config_hash);
  family.write(dir / "family.csv", config_hash);
  jump.write(dir / "jump.csv", config_hash);
  auto dump = [&](const char* name, const json& j) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / name).string());
    out << j.dump(2) << '\n';
  };
  dump("fits.json", fits);
  dump("metadata.json", metadata);
}

}  // namespace thinflow

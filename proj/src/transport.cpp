#include "thinflow/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <set>
#include <utility>

#include "thinflow/error.hpp"

namespace thinflow {

double Bump::value(Vec2 x) const {
  const double q = norm2(x - center) / (radius * radius);
  if (q >= 1.0) return 0.0;
  const double b = 1.0 - q;
  return amplitude * b * b * b;
}

double Bump::integral() const { return amplitude * std::numbers::pi * radius * radius / 4.0; }

double InitialVorticity::operator()(Vec2 x) const {
  double w = 0.0;
  for (const auto& b : bumps) w += b.value(x);
  return w;
}

double InitialVorticity::total() const {
  double q = 0.0;
  for (const auto& b : bumps) q += b.integral();
  return q;
}

void InitialVorticity::validate_support(const ConformalMap& map) const {
  for (std::size_t k = 0; k < bumps.size(); ++k) {
    const Bump& b = bumps[k];
    for (int i = 0; i <= 16; ++i) {
      const double r = b.radius * i / 16.0;
      const int nt = i == 0 ? 1 : 64;
      for (int j = 0; j < nt; ++j) {
        const double t = 2.0 * std::numbers::pi * j / nt;
        const Vec2 x = b.center + r * Vec2{std::cos(t), std::sin(t)};
        if (!map.in_domain(x))
          throw DomainError("initial vorticity: support of bump " + std::to_string(k) + " meets the obstacle");
      }
    }
  }
}

VorticitySample discretize(const InitialVorticity& iv, double h, double delta) {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("discretize: h must be positive");
  if (iv.bumps.empty()) throw DomainError("discretize: empty support");
  std::set<std::pair<long, long>> cells;
  for (const auto& b : iv.bumps) {
    if (!(b.radius > 0.0)) throw DomainError("discretize: bump radius must be positive");
    const long i0 = static_cast<long>(std::floor((b.center.x - b.radius) / h));
    const long i1 = static_cast<long>(std::ceil((b.center.x + b.radius) / h));
    const long j0 = static_cast<long>(std::floor((b.center.y - b.radius) / h));
    const long j1 = static_cast<long>(std::ceil((b.center.y + b.radius) / h));
    for (long i = i0; i <= i1; ++i)
      for (long j = j0; j <= j1; ++j)
        if (norm2(Vec2{i * h, j * h} - b.center) < b.radius * b.radius) cells.insert({i, j});
  }
  VorticitySample s;
  s.blob_radius = delta > 0.0 ? delta : 2.0 * h;
  s.cell_area = h * h;
  for (const auto& [i, j] : cells) {
    const Vec2 x{i * h, j * h};
    s.positions.push_back(x);
    s.strengths.push_back(iv(x) * s.cell_area);
  }
  return s;
}

std::vector<Vec2> particle_velocities(const VelocityEvaluator& ev) { return ev.particle_velocities(); }

namespace {

std::vector<Vec2> stage_velocities(const MapPtr& map, const VorticitySample& s, double alpha, double t) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (map->on_slit(s.positions[i])) throw PenetrationError(i, t, "particle reached the slit");
    if (!(std::abs(map->forward(s.positions[i])) > 1.0))
      throw PenetrationError(i, t, "particle reached obstacle");
  }
  return VelocityEvaluator(map, s, alpha).particle_velocities();
}

void check_paths(const MapPtr& map, const std::vector<Vec2>& from, const std::vector<Vec2>& to, double t) {
  if (!map->has_slit()) return;
  for (std::size_t i = 0; i < from.size(); ++i)
    if (map->crosses_slit(from[i], to[i])) throw PenetrationError(i, t, "particle path crosses the slit");
}

// k1 holds the velocities at the start of the step.
VorticitySample advance(const VorticitySample& sample, const MapPtr& map, double alpha, double dt, double t0,
                        const std::vector<Vec2>& k1) {
  const std::size_t n = sample.size();
  VorticitySample stage = sample;
  auto offset = [&](const std::vector<Vec2>& k, double c) {
    for (std::size_t i = 0; i < n; ++i) stage.positions[i] = sample.positions[i] + c * k[i];
    check_paths(map, sample.positions, stage.positions, t0);
  };
  offset(k1, 0.5 * dt);
  const auto k2 = stage_velocities(map, stage, alpha, t0 + 0.5 * dt);
  offset(k2, 0.5 * dt);
  const auto k3 = stage_velocities(map, stage, alpha, t0 + 0.5 * dt);
  offset(k3, dt);
  const auto k4 = stage_velocities(map, stage, alpha, t0 + dt);
  VorticitySample next = sample;
  for (std::size_t i = 0; i < n; ++i)
    next.positions[i] = sample.positions[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  check_paths(map, sample.positions, next.positions, t0 + dt);
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_finite(next.positions[i])) throw PenetrationError(i, t0 + dt, "non-finite position");
    if (map->on_slit(next.positions[i]) || !(std::abs(map->forward(next.positions[i])) > 1.0))
      throw PenetrationError(i, t0 + dt, "particle reached obstacle");
  }
  return next;
}

}  // namespace

VorticitySample rk4_step(const VorticitySample& sample, const MapPtr& map, double alpha, double dt, double t0) {
  if (!(dt != 0.0) || !std::isfinite(dt)) throw DomainError("rk4_step: dt must be finite and nonzero");
  if (!map) throw DomainError("rk4_step: null map");
  sample.validate();
  return advance(sample, map, alpha, dt, t0, stage_velocities(map, sample, alpha, t0));
}

VorticitySample Trajectory::state(std::size_t k) const {
  if (k >= positions.size()) throw DomainError("trajectory: state index out of range");
  VorticitySample s;
  s.positions = positions[k];
  s.strengths = strengths;
  s.blob_radius = blob_radius;
  s.cell_area = cell_area;
  return s;
}

namespace {

StepDiagnostics diagnose(const MapPtr& map, const VorticitySample& s, const std::vector<Vec2>& u, double t,
                         double r_ref, const std::vector<double>& initial) {
  StepDiagnostics d;
  d.time = t;
  d.strengths_match = s.strengths == initial;
  double linf = 0.0;
  for (double g : s.strengths) {
    d.total_strength += g;
    d.l1 += std::abs(g);
    linf = std::max(linf, std::abs(g));
  }
  d.linf = s.cell_area > 0.0 ? linf / s.cell_area : linf;
  d.support_radius = s.support_radius();
  d.min_modulus = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double speed = norm(u[i]);
    d.max_speed = std::max(d.max_speed, speed);
    const double r = norm(s.positions[i]);
    if (s.strengths[i] != 0.0 && r >= r_ref && r > 0.0) d.growth_rate = std::max(d.growth_rate, speed / r);
    d.min_modulus = std::min(d.min_modulus, std::abs(map->forward(s.positions[i])));
  }
  return d;
}

}  // namespace

Trajectory run(const FlowConfig& config, MapPtr map, double horizon, double dt, RunOptions options) {
  if (!map) throw DomainError("run: null map");
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw DomainError("run: horizon must be nonnegative");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("run: dt must be positive");
  if (options.record_stride == 0) throw DomainError("run: record stride must be positive");
  const double steps_real = horizon / dt;
  const auto steps = static_cast<std::size_t>(std::llround(steps_real));
  if (std::abs(steps_real - static_cast<double>(steps)) > 1e-9 * std::max(1.0, steps_real))
    throw DomainError("run: horizon is not an integer multiple of dt");

  const VorticitySample& s0 = config.sample;
  s0.validate();
  Trajectory traj;
  traj.map = map;
  traj.alpha = config.alpha();
  traj.dt = dt;
  traj.blob_radius = s0.blob_radius;
  traj.cell_area = s0.cell_area;
  traj.strengths = s0.strengths;
  traj.envelope_radius = options.envelope_radius > 0.0 ? options.envelope_radius : s0.support_radius();

  VorticitySample current = s0;
  auto u = stage_velocities(map, current, traj.alpha, 0.0);
  traj.times.push_back(0.0);
  traj.positions.push_back(current.positions);
  traj.diagnostics.push_back(diagnose(map, current, u, 0.0, traj.envelope_radius, s0.strengths));
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t0 = static_cast<double>(k - 1) * dt;
    const double t1 = static_cast<double>(k) * dt;
    current = advance(current, map, traj.alpha, dt, t0, u);
    u = stage_velocities(map, current, traj.alpha, t1);
    traj.diagnostics.push_back(diagnose(map, current, u, t1, traj.envelope_radius, s0.strengths));
    if (k % options.record_stride == 0 || k == steps) {
      traj.times.push_back(t1);
      traj.positions.push_back(current.positions);
    }
  }
  return traj;
}

ConservationReport conservation_report(const Trajectory& traj, const std::vector<double>& initial_strengths) {
  if (traj.diagnostics.empty()) throw DomainError("conservation report: empty trajectory");
  ConservationReport r;
  const StepDiagnostics& d0 = traj.diagnostics.front();
  r.strengths_identical = traj.strengths == initial_strengths;
  for (const auto& d : traj.diagnostics) {
    r.max_total_drift = std::max(r.max_total_drift, std::abs(d.total_strength - d0.total_strength));
    r.max_l1_drift = std::max(r.max_l1_drift, std::abs(d.l1 - d0.l1));
    r.max_linf_drift = std::max(r.max_linf_drift, std::abs(d.linf - d0.linf));
    r.strengths_identical = r.strengths_identical && d.strengths_match;
    r.growth_rate = std::max(r.growth_rate, d.growth_rate);
  }
  const double r0 = std::max(d0.support_radius, traj.envelope_radius);
  r.max_envelope_excess = -std::numeric_limits<double>::infinity();
  for (const auto& d : traj.diagnostics)
    r.max_envelope_excess = std::max(r.max_envelope_excess, d.support_radius - r0 * std::exp(r.growth_rate * d.time));
  return r;
}

}  // namespace thinflow

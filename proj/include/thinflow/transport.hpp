#pragma once

#include <cstddef>
#include <vector>

#include "thinflow/kernels.hpp"

namespace thinflow {

// Compactly supported C^2 bump A (1 - |x-c|^2/R^2)^3.
struct Bump {
  Vec2 center;
  double radius = 1.0;
  double amplitude = 1.0;

  double value(Vec2 x) const;
  double integral() const;
};

struct InitialVorticity {
  std::vector<Bump> bumps;

  double operator()(Vec2 x) const;
  double total() const;
  // Throws DomainError if any support disk meets the obstacle of the map (checked on a
  // dense sample of each support disk, boundary included).
  void validate_support(const ConformalMap& map) const;
};

// Particles at lattice points k*h inside the support with strengths omega0(x) h^2.
// delta <= 0 selects the default blob radius 2h.
VorticitySample discretize(const InitialVorticity& iv, double h, double delta = 0.0);

std::vector<Vec2> particle_velocities(const VelocityEvaluator& ev);

// Classical RK4 step of the particle positions; strengths are copied unchanged.
// Negative dt integrates backward. Throws PenetrationError if a stage leaves the domain.
VorticitySample rk4_step(const VorticitySample& sample, const MapPtr& map, double alpha, double dt,
                         double t0 = 0.0);

struct StepDiagnostics {
  double time = 0.0;
  double total_strength = 0.0;
  double l1 = 0.0;          // sum |strength|
  double linf = 0.0;        // max |strength| / cell area
  double support_radius = 0.0;
  double max_speed = 0.0;
  double growth_rate = 0.0; // max |u|/|x| over particles with |x| >= reference radius
  double min_modulus = 0.0; // min |T(x)| over particles
  bool strengths_match = true;  // bitwise equal to the initial strengths
};

struct RunOptions {
  std::size_t record_stride = 1;
  // Reference radius for the growth-rate instrument; <= 0 uses the initial support radius.
  double envelope_radius = 0.0;
};

struct Trajectory {
  MapPtr map;
  double alpha = 0.0;
  double dt = 0.0;
  double blob_radius = 0.0;
  double cell_area = 0.0;
  double envelope_radius = 0.0;
  std::vector<double> strengths;
  std::vector<double> times;                   // recorded states
  std::vector<std::vector<Vec2>> positions;    // recorded states
  std::vector<StepDiagnostics> diagnostics;    // every step, including t = 0

  VorticitySample state(std::size_t k) const;
  VelocityEvaluator evaluator(std::size_t k) const { return {map, state(k), alpha}; }
};

Trajectory run(const FlowConfig& config, MapPtr map, double horizon, double dt, RunOptions options = {});

struct ConservationReport {
  double max_total_drift = 0.0;
  double max_l1_drift = 0.0;
  double max_linf_drift = 0.0;
  bool strengths_identical = true;
  double growth_rate = 0.0;      // sup over steps
  double max_envelope_excess = 0.0; // max over steps of R(t) - R0 exp(rate t), <= 0 when confined
  bool drift_free() const { return max_total_drift == 0.0 && max_l1_drift == 0.0 && max_linf_drift == 0.0; }
};

ConservationReport conservation_report(const Trajectory& traj, const std::vector<double>& initial_strengths);

}  // namespace thinflow

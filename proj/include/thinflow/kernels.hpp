#pragma once

#include <functional>
#include <vector>

#include "thinflow/conformal.hpp"
#include "thinflow/vorticity.hpp"

namespace thinflow {

// Inversion through the unit circle, x / |x|^2.
Vec2 star(Vec2 x);
Complex star(Complex z);

// Dirichlet Green function of the exterior domain.
double green_function(const ConformalMap& map, Vec2 x, Vec2 y);
// Biot-Savart kernel K(x, y) of the exterior domain (point vortex at y).
Vec2 biot_savart_kernel(const ConformalMap& map, Vec2 x, Vec2 y);
// Harmonic field with unit circulation around the obstacle, tangent to the boundary.
Vec2 harmonic_field(const ConformalMap& map, Vec2 x);

struct FlowConfig {
  double gamma = 0.0;  // circulation of the initial velocity around the obstacle
  VorticitySample sample;

  double alpha() const { return gamma + sample.total_strength(); }
};

// Velocity of a blob discretization. Blobs are smoothed in the mapped plane with the
// image blob radius scaled by 1/|eta| so the field stays exactly tangent on |T| = 1.
class VelocityEvaluator {
 public:
  VelocityEvaluator(MapPtr map, const VorticitySample& sample, double alpha);

  const ConformalMap& map() const { return *map_; }
  const MapPtr& map_ptr() const { return map_; }
  double alpha() const { return alpha_; }
  std::size_t size() const { return eta_.size(); }

  // Mapped-plane field: sum_j G_j [blob(z - eta_j) - image blob] + alpha z^perp / |z|^2.
  Complex mapped_field(Complex z, bool include_harmonic = true) const;

  // Vorticity density in the mapped plane; vorticity(x) = |T'(x)|^2 mapped_vorticity(T(x)).
  double mapped_vorticity(Complex z) const;

  Vec2 total_velocity(Vec2 x) const;
  // K[omega] part without the harmonic term.
  Vec2 vortical_part(Vec2 x) const;
  // One-sided boundary trace on a slit, computed from the exact side limit of T.
  Vec2 side_velocity(double s, Side side) const;
  // Curl of total_velocity (the smoothed vorticity carried by the blobs and their images).
  double vorticity(Vec2 x) const;
  // Velocities at the particle positions.
  std::vector<Vec2> particle_velocities() const;

 private:
  Complex velocity_at(Complex z, Complex dT, bool include_harmonic) const;

  MapPtr map_;
  double alpha_;
  double delta2_;
  std::vector<Complex> eta_;
  std::vector<Complex> d_eta_;  // T' at the particle positions
  std::vector<Complex> eta_star_;
  std::vector<double> image_delta2_;
  std::vector<double> gamma_;
};

// Alpha of a flow: boundary circulation plus total vorticity.
inline double alpha_constant(const FlowConfig& config) { return config.alpha(); }

// K[omega](x) for a blob sample (no harmonic part).
Vec2 biot_savart_apply(MapPtr map, const VorticitySample& sample, Vec2 x);

// Sharp constant of the potential estimate int |x-y|^{-a} |h(y)| dy <= C ||h||_1^{1-a/2} ||h||_inf^{a/2}.
double potential_bound_constant(double a);

struct Density {
  std::function<double(Vec2)> value;
  Vec2 center;
  double radius;  // h vanishes outside the disk B(center, radius)
};

struct PotentialBoundCheck {
  double lhs;
  double rhs;
  double l1;
  double linf;
};

PotentialBoundCheck potential_bound_check(const Density& h, double a, Vec2 x);

}  // namespace thinflow

#pragma once

#include <functional>
#include <vector>

#include "thinflow/transport.hpp"

namespace thinflow {

// C-infinity smoothstep: 0 for s <= 1, 1 for s >= 2, increasing in between.
double smooth_profile(double s);
double smooth_profile_derivative(double s);

// Phi^eps(x) = Phi((|T_eps(x)| - 1)/eps), extended by zero inside the obstacle.
class CutoffField {
 public:
  explicit CutoffField(MapPtr eps_map);

  double value(Vec2 x) const;
  Vec2 gradient(Vec2 x) const;
  double eps() const { return eps_; }
  const MapPtr& map() const { return map_; }

 private:
  MapPtr map_;
  double eps_;
};

inline double cutoff_eval(const CutoffField& c, Vec2 x) { return c.value(x); }
inline Vec2 cutoff_grad(const CutoffField& c, Vec2 x) { return c.gradient(x); }

// Radial and angular resolution of mapped-plane quadratures.
struct QuadratureSpec {
  std::size_t n_theta = 512;
  double max_panel = 0.05;  // radial Gauss-Legendre panel width in the mapped plane
};

// Radius r(theta) where |T^{-1}(r e^{i theta})| = R, for a map with |T^{-1}| increasing in r.
double window_radius(const ConformalMap& map, double theta, double R);

// Area of {1 <= |T_eps| <= 1 + 2 eps}.
double transition_measure(const CutoffField& c, const QuadratureSpec& q = {});
// || u^eps . grad Phi^eps ||_{L^1}.
double flux_norm(const VelocityEvaluator& eps_ev, const CutoffField& c, const QuadratureSpec& q = {});
// || Phi^eps u^eps - u ||_{L^2(B(0,R))}; eps_ev lives on T_eps = T/(1+eps), limit_ev on T.
double l2loc_velocity_error(const VelocityEvaluator& eps_ev, const VelocityEvaluator& limit_ev, double R,
                            const QuadratureSpec& q = {});
// || Phi^eps u^eps - u^eps ||_{L^2(Pi_eps)}.
double extension_consistency(const VelocityEvaluator& eps_ev, const QuadratureSpec& q = {});

struct FamilyRow {
  double eps = 0.0;
  double sup_distance = 0.0;     // sup |T_eps - T| on B(0,R) cap Pi_eps
  double sup_formula = 0.0;      // eps/(1+eps) sup |T| on the same samples
  double inverse_det_sup = 0.0;  // sup det D(T_eps^{-1}) over Pi_eps
  double l3_distance = 0.0;      // || DT_eps - DT ||_{L^3(B(0,R) cap Pi_eps)}
  double growth_constant = 0.0;  // sup |DT_eps(x)|/|x| over 10 <= |x| <= 100
};

std::vector<FamilyRow> family_report(const std::vector<double>& eps_values, const MapPtr& base, double R,
                                           const QuadratureSpec& q = {});

// Space-time test function phi(x,t).
struct SpaceTimeTest {
  std::function<double(Vec2, double)> value;
  std::function<double(Vec2, double)> time_derivative;
  std::function<Vec2(Vec2, double)> gradient;
};

// Smooth spatial bump exp(1 - 1/(1 - |x-c|^2/rho^2)) with gradient.
struct SpatialTest {
  Vec2 center;
  double radius = 1.0;
  bool constant = false;  // psi == 1 everywhere

  double value(Vec2 x) const;
  Vec2 gradient(Vec2 x) const;
};

// phi(x,t) = eta(t) psi(x) with eta = 1 at t = 0 and eta = 0 for t >= t_stop.
SpaceTimeTest separable_test(const SpatialTest& psi, double t_stop);

// Sum of the weak-form terms: time integral of sum_j G_j (phi_t + grad phi . u)(X_j, t) plus
// the integral of phi(x,0) omega0 by quadrature on the continuous initial vorticity.
double weak_residual(const Trajectory& traj, const SpaceTimeTest& phi, const InitialVorticity& omega0);

// max_t | d/dt sum_j G_j (Phi^eps psi)(X_j) | for a fixed spatial test function.
double moment_rate(const Trajectory& traj, const CutoffField& c, const SpatialTest& psi);

struct EpsilonSweep {
  std::vector<double> eps_values;

  // Throws DomainError("empty sweep") or on non-decreasing / nonpositive values.
  void validate() const;
};

}  // namespace thinflow

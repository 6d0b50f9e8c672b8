#pragma once

#include <array>
#include <vector>

#include "thinflow/kernels.hpp"
#include "thinflow/limits.hpp"

namespace thinflow {

enum class TraceMethod {
  exact,       // side limits of T and T' in closed form
  richardson,  // off-slit evaluations extrapolated to zero offset
};

// Offsets used for the extrapolated trace, scaled down near the slit endpoints.
inline constexpr std::array<double, 3> kTraceOffsets{1e-4, 5e-5, 2.5e-5};

Vec2 extrapolated_side_velocity(const VelocityEvaluator& ev, double s, Side side);

// g(s) = (u_down - u_up) . tau(s).
double jump_density(const VelocityEvaluator& ev, double s, TraceMethod method = TraceMethod::richardson);

// Closed form of g for a pure unit circulation around the slit [-1,1].
double circulation_jump(double s);

struct JumpSample {
  double s;
  double g;
  bool in_fit_window;  // 1e-5 <= distance to the nearest endpoint <= 1e-3
};

struct JumpDensity {
  std::vector<JumpSample> samples;
  std::array<double, 2> endpoint_coeffs{};  // at s = -1 and s = +1
};

// n_interior Chebyshev-spaced samples plus log-spaced samples near both endpoints.
JumpDensity sample_jump_density(const VelocityEvaluator& ev, std::size_t n_interior = 64,
                                TraceMethod method = TraceMethod::richardson);

// Intercept of a least-squares fit of pi g(s) sqrt(1-s^2) against sqrt(1-s^2) on the window
// samples at the requested end (which = -1 or +1).
double endpoint_coefficient(const JumpDensity& jd, int which);

// Integral of g over the slit (substitution s = cos theta).
double jump_mass(const VelocityEvaluator& ev, std::size_t panels = 16);

// Integral of the blob vorticity over the whole exterior domain.
double vorticity_mass(const VelocityEvaluator& ev, std::size_t n_theta = 1024, double max_panel = 0.004);

struct PairingTerms {
  double curl_pairing = 0.0;  // -int u . grad^perp phi
  double vorticity = 0.0;     // int phi omega
  double layer = 0.0;         // int_Gamma phi g ds
  double residual = 0.0;      // curl_pairing - vorticity - layer
  double divergence = 0.0;    // int u . grad phi
  double scale() const;
  double relative() const { return residual / scale(); }
};

struct PairingGrid {
  std::size_t n_r = 512;      // midpoint cells in the mapped radial direction
  std::size_t n_theta = 1024; // trapezoid nodes in angle
};

// Evaluates the pairing identity for each spatial test function on one shared mapped-plane grid.
std::vector<PairingTerms> distributional_curl_check(const VelocityEvaluator& ev, const std::vector<SpatialTest>& tests,
                                                    const PairingGrid& grid = {});
double divergence_free_check(const VelocityEvaluator& ev, const SpatialTest& phi, const PairingGrid& grid = {});

}  // namespace thinflow

#include "thinflow/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "thinflow/error.hpp"
#include "thinflow/quadrature.hpp"

namespace thinflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Complex kI{0.0, 1.0};

Complex checked_forward(const ConformalMap& map, Vec2 x, const char* who) {
  if (!is_finite(x)) throw DomainError(std::string(who) + ": non-finite point");
  const Complex z = map.forward(x);
  // Boundary points reconstructed through the inverse map may sit an ulp inside.
  if (!(std::abs(z) >= 1.0 - 1e-12)) throw DomainError(std::string(who) + ": point inside the obstacle");
  return z;
}

}  // namespace

Vec2 star(Vec2 x) {
  const double r2 = norm2(x);
  if (r2 == 0.0) throw DomainError("star: zero vector");
  return x / r2;
}

Complex star(Complex z) {
  const double r2 = std::norm(z);
  if (r2 == 0.0) throw DomainError("star: zero");
  return z / r2;
}

double green_function(const ConformalMap& map, Vec2 x, Vec2 y) {
  const Complex tx = checked_forward(map, x, "green_function");
  const Complex ty = checked_forward(map, y, "green_function");
  const double num = std::abs(tx - ty);
  if (num == 0.0) throw DomainError("green_function: x == y");
  return std::log(num / (std::abs(tx - star(ty)) * std::abs(ty))) / kTwoPi;
}

Vec2 biot_savart_kernel(const ConformalMap& map, Vec2 x, Vec2 y) {
  const Complex tx = checked_forward(map, x, "biot_savart_kernel");
  const Complex ty = checked_forward(map, y, "biot_savart_kernel");
  const Complex d = tx - ty;
  if (d == Complex{0.0, 0.0}) throw DomainError("biot_savart_kernel: x == y");
  const Complex e = tx - star(ty);
  const Complex b = kI * d / std::norm(d) - kI * e / std::norm(e);
  return to_vec(std::conj(map.derivative(x)) * b / kTwoPi);
}

Vec2 harmonic_field(const ConformalMap& map, Vec2 x) {
  const Complex t = checked_forward(map, x, "harmonic_field");
  // (1/2pi) J^t T^perp/|T|^2 written as (1/(2pi|T|)) (grad|T|)^perp, grad|T| = conj(T') T / |T|.
  const double m = std::abs(t);
  const Complex grad = std::conj(map.derivative(x)) * t / m;
  return to_vec(kI * grad / (kTwoPi * m));
}

VelocityEvaluator::VelocityEvaluator(MapPtr map, const VorticitySample& sample, double alpha)
    : map_(std::move(map)), alpha_(alpha) {
  if (!map_) throw DomainError("velocity evaluator: null map");
  if (!std::isfinite(alpha)) throw DomainError("velocity evaluator: non-finite alpha");
  sample.validate();
  delta2_ = sample.blob_radius * sample.blob_radius;
  const std::size_t n = sample.size();
  eta_.resize(n);
  d_eta_.resize(n);
  eta_star_.resize(n);
  image_delta2_.resize(n);
  gamma_ = sample.strengths;
  for (std::size_t j = 0; j < n; ++j) {
    if (map_->on_slit(sample.positions[j]))
      throw PenetrationError(j, 0.0, "particle on the slit");
    const Complex z = map_->forward(sample.positions[j]);
    if (!(std::abs(z) > 1.0)) throw PenetrationError(j, 0.0, "particle inside the obstacle");
    eta_[j] = z;
    d_eta_[j] = map_->derivative(sample.positions[j]);
    eta_star_[j] = star(z);
    image_delta2_[j] = delta2_ / std::norm(z);
  }
}

Complex VelocityEvaluator::mapped_field(Complex z, bool include_harmonic) const {
  double bx = 0.0;
  double by = 0.0;
  const double zx = z.real();
  const double zy = z.imag();
  for (std::size_t j = 0; j < eta_.size(); ++j) {
    const double dx = zx - eta_[j].real();
    const double dy = zy - eta_[j].imag();
    const double ex = zx - eta_star_[j].real();
    const double ey = zy - eta_star_[j].imag();
    const double a = gamma_[j] / (dx * dx + dy * dy + delta2_);
    const double b = gamma_[j] / (ex * ex + ey * ey + image_delta2_[j]);
    bx += -dy * a + ey * b;
    by += dx * a - ex * b;
  }
  Complex out{bx, by};
  if (include_harmonic) out += alpha_ * kI * z / std::norm(z);
  return out;
}

Complex VelocityEvaluator::velocity_at(Complex z, Complex dT, bool include_harmonic) const {
  return std::conj(dT) * mapped_field(z, include_harmonic) / kTwoPi;
}

Vec2 VelocityEvaluator::total_velocity(Vec2 x) const {
  const Complex z = checked_forward(*map_, x, "total_velocity");
  return to_vec(velocity_at(z, map_->derivative(x), true));
}

Vec2 VelocityEvaluator::vortical_part(Vec2 x) const {
  const Complex z = checked_forward(*map_, x, "vortical_part");
  return to_vec(velocity_at(z, map_->derivative(x), false));
}

Vec2 VelocityEvaluator::side_velocity(double s, Side side) const {
  if (!map_->has_slit()) throw DomainError("side_velocity: map has no slit");
  return to_vec(velocity_at(map_->side_forward(s, side), map_->side_derivative(s, side), true));
}

double VelocityEvaluator::mapped_vorticity(Complex z) const {
  double w = 0.0;
  for (std::size_t j = 0; j < eta_.size(); ++j) {
    const double p = std::norm(z - eta_[j]) + delta2_;
    const double q = std::norm(z - eta_star_[j]) + image_delta2_[j];
    w += gamma_[j] * (delta2_ / (p * p) - image_delta2_[j] / (q * q));
  }
  return w / std::numbers::pi;
}

double VelocityEvaluator::vorticity(Vec2 x) const {
  const Complex z = checked_forward(*map_, x, "vorticity");
  return std::norm(map_->derivative(x)) * mapped_vorticity(z);
}

std::vector<Vec2> VelocityEvaluator::particle_velocities() const {
  std::vector<Vec2> out(eta_.size());
  for (std::size_t i = 0; i < eta_.size(); ++i) {
    // The blob kernel vanishes at zero separation, so the self term drops out.
    out[i] = to_vec(velocity_at(eta_[i], d_eta_[i], true));
  }
  return out;
}

Vec2 biot_savart_apply(MapPtr map, const VorticitySample& sample, Vec2 x) {
  return VelocityEvaluator(std::move(map), sample, 0.0).vortical_part(x);
}

double potential_bound_constant(double a) {
  if (!(a > 0.0 && a < 2.0)) throw DomainError("potential bound: a must lie in (0,2)");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * a) / (2.0 - a);
}

PotentialBoundCheck potential_bound_check(const Density& h, double a, Vec2 x) {
  const double c = potential_bound_constant(a);
  if (!h.value || !(h.radius > 0.0)) throw DomainError("potential bound: invalid density");
  const auto theta = periodic_nodes(256);

  // Norms over the support disk, polar coordinates around its center.
  const auto rn = composite_gauss({0.0, h.radius}, h.radius / 16.0);
  double l1 = 0.0;
  double linf = std::abs(h.value(h.center));
  for (const auto& r : rn)
    for (const auto& t : theta) {
      const double v = std::abs(h.value(h.center + r.x * Vec2{std::cos(t.x), std::sin(t.x)}));
      l1 += v * r.x * r.w * t.w;
      linf = std::max(linf, v);
    }

  // Potential: polar coordinates around x with u = rho^{2-a}/(2-a) absorbing the singularity.
  const double rho_max = norm(x - h.center) + h.radius;
  const double p = 2.0 - a;
  const double u_max = std::pow(rho_max, p) / p;
  const auto un = composite_gauss({0.0, u_max}, u_max / 64.0);
  double lhs = 0.0;
  for (const auto& u : un) {
    const double rho = std::pow(p * u.x, 1.0 / p);
    for (const auto& t : theta)
      lhs += std::abs(h.value(x + rho * Vec2{std::cos(t.x), std::sin(t.x)})) * u.w * t.w;
  }
  const double rhs = c * std::pow(l1, 1.0 - 0.5 * a) * std::pow(linf, 0.5 * a);
  return {lhs, rhs, l1, linf};
}

}  // namespace thinflow

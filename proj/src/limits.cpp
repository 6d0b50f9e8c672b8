#include "thinflow/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "thinflow/error.hpp"
#include "thinflow/quadrature.hpp"

namespace thinflow {

namespace {

constexpr double kPi = std::numbers::pi;

double bump_kernel(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// Integrates f(z) over {r_lo(theta) <= |z| <= ...} in polar coordinates; breaks(theta) gives the
// radial breakpoints, which must start at the inner radius and end at the outer one.
template <class Breaks, class F>
double polar_integral(std::size_t n_theta, double max_panel, Breaks breaks, F f) {
  double total = 0.0;
  for (const auto& t : periodic_nodes(n_theta)) {
    const Complex e{std::cos(t.x), std::sin(t.x)};
    const std::vector<double> b = breaks(t.x);
    if (b.back() <= b.front()) continue;
    double ring = 0.0;
    for (const auto& r : composite_gauss(b, max_panel)) ring += f(r.x * e, r.x) * r.x * r.w;
    total += ring * t.w;
  }
  return total;
}

void require_eps_map(const ConformalMap& m, const char* who) {
  if (!(m.epsilon() > 0.0)) throw DomainError(std::string(who) + ": evaluator must live on an epsilon map");
}

}  // namespace

double smooth_profile(double s) {
  if (s <= 1.0) return 0.0;
  if (s >= 2.0) return 1.0;
  const double a = bump_kernel(s - 1.0);
  const double b = bump_kernel(2.0 - s);
  return a / (a + b);
}

double smooth_profile_derivative(double s) {
  if (s <= 1.0 || s >= 2.0) return 0.0;
  const double p = s - 1.0;
  const double q = 2.0 - s;
  const double a = bump_kernel(p);
  const double b = bump_kernel(q);
  const double d = a + b;
  return (a / (p * p) * b + a * b / (q * q)) / (d * d);
}

CutoffField::CutoffField(MapPtr eps_map) : map_(std::move(eps_map)) {
  if (!map_) throw DomainError("cutoff: null map");
  eps_ = map_->epsilon();
  if (!(eps_ > 0.0)) throw DomainError("cutoff: map must be an epsilon map");
}

double CutoffField::value(Vec2 x) const {
  if (!is_finite(x)) throw DomainError("cutoff: non-finite point");
  if (map_->on_slit(x)) return 0.0;
  const double m = std::abs(map_->forward(x));
  if (m < 1.0) return 0.0;
  return smooth_profile((m - 1.0) / eps_);
}

Vec2 CutoffField::gradient(Vec2 x) const {
  if (!is_finite(x)) throw DomainError("cutoff: non-finite point");
  if (map_->on_slit(x)) return {};
  const Complex w = map_->forward(x);
  const double m = std::abs(w);
  const double s = (m - 1.0) / eps_;
  if (s <= 1.0 || s >= 2.0) return {};
  const Complex grad_modulus = std::conj(map_->derivative(x)) * w / m;
  return (smooth_profile_derivative(s) / eps_) * to_vec(grad_modulus);
}

double window_radius(const ConformalMap& map, double theta, double R) {
  const Complex e{std::cos(theta), std::sin(theta)};
  auto modulus = [&](double r) { return norm(map.inverse(r * e)); };
  if (modulus(1.0) >= R) return 1.0;
  double lo = 1.0;
  double hi = 2.0;
  while (modulus(hi) < R) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw DomainError("window_radius: window not reached");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (modulus(mid) < R ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double transition_measure(const CutoffField& c, const QuadratureSpec& q) {
  const double eps = c.eps();
  const ConformalMap& m = *c.map();
  return polar_integral(
      q.n_theta, std::min(q.max_panel, eps), [&](double) { return std::vector<double>{1.0, 1.0 + 2.0 * eps}; },
      [&](Complex w, double) { return std::norm(m.inverse_derivative(w)); });
}

double flux_norm(const VelocityEvaluator& eps_ev, const CutoffField& c, const QuadratureSpec& q) {
  require_eps_map(eps_ev.map(), "flux_norm");
  const double eps = c.eps();
  if (std::abs(eps_ev.map().epsilon() - eps) > 1e-15) throw DomainError("flux_norm: mismatched eps");
  // u . grad Phi dx = Phi'(s)/eps * Re(conj(B) w)/(2 pi |w|) dw in the mapped plane.
  return polar_integral(
      q.n_theta, std::min(q.max_panel, eps / 8.0),
      [&](double) { return std::vector<double>{1.0 + eps, 1.0 + 2.0 * eps}; },
      [&](Complex w, double r) {
        const Complex b = eps_ev.mapped_field(w);
        const double radial = (std::conj(b) * w).real() / r;
        return std::abs(smooth_profile_derivative((r - 1.0) / eps) * radial) / (2.0 * kPi * eps);
      });
}

double l2loc_velocity_error(const VelocityEvaluator& eps_ev, const VelocityEvaluator& limit_ev, double R,
                            const QuadratureSpec& q) {
  require_eps_map(eps_ev.map(), "l2loc_velocity_error");
  if (limit_ev.map().epsilon() != 0.0) throw DomainError("l2loc_velocity_error: limit evaluator must use the base map");
  if (!(R > 0.0)) throw DomainError("l2loc_velocity_error: R must be positive");
  const double eps = eps_ev.map().epsilon();
  const double scale = 1.0 + eps;
  const double phi0 = scale * scale;            // Phi^eps = 0 below
  const double phi1 = scale * (1.0 + 2.0 * eps);  // Phi^eps = 1 above
  const ConformalMap& base = limit_ev.map();
  // With z = T(x): |Phi u^eps - u|^2 dx = |Phi B_eps(z/(1+eps))/(1+eps) - B(z)|^2 / (4 pi^2) dz.
  const double sq = polar_integral(
      q.n_theta, q.max_panel,
      [&](double theta) {
        const double rmax = window_radius(base, theta, R);
        std::vector<double> b{1.0};
        for (double r : {phi0, phi1})
          if (r < rmax) b.push_back(r);
        b.push_back(rmax);
        return b;
      },
      [&](Complex z, double r) {
        const Complex b = limit_ev.mapped_field(z);
        if (r <= phi0) return std::norm(b);
        const Complex w = z / scale;
        const double cut = smooth_profile((r / scale - 1.0) / eps);
        return std::norm(cut * eps_ev.mapped_field(w) / scale - b);
      });
  return std::sqrt(sq) / (2.0 * kPi);
}

double extension_consistency(const VelocityEvaluator& eps_ev, const QuadratureSpec& q) {
  require_eps_map(eps_ev.map(), "extension_consistency");
  const double eps = eps_ev.map().epsilon();
  const double sq = polar_integral(
      q.n_theta, std::min(q.max_panel, eps / 4.0),
      [&](double) { return std::vector<double>{1.0, 1.0 + eps, 1.0 + 2.0 * eps}; },
      [&](Complex w, double r) {
        const double miss = 1.0 - smooth_profile((r - 1.0) / eps);
        return miss * miss * std::norm(eps_ev.mapped_field(w));
      });
  return std::sqrt(sq) / (2.0 * kPi);
}

std::vector<FamilyRow> family_report(const std::vector<double>& eps_values, const MapPtr& base, double R,
                                           const QuadratureSpec& q) {
  if (!base) throw DomainError("family report: null base map");
  std::vector<FamilyRow> rows;
  for (double eps : eps_values) {
    const MapPtr m = epsilon_map(base, eps);
    FamilyRow row;
    row.eps = eps;
    const double scale = 1.0 + eps;
    double sup_t = 0.0;
    double l3 = 0.0;
    for (const auto& t : periodic_nodes(q.n_theta)) {
      const Complex e{std::cos(t.x), std::sin(t.x)};
      const double rmax = window_radius(*base, t.x, R);
      if (rmax <= scale) continue;
      auto nodes = composite_gauss({scale, rmax}, q.max_panel);
      nodes.push_back({scale, 0.0});
      nodes.push_back({rmax, 0.0});
      double ring = 0.0;
      for (const auto& r : nodes) {
        const Complex z = r.x * e;
        const Vec2 x = base->inverse(z);
        row.sup_distance = std::max(row.sup_distance, std::abs(m->forward(x) - base->forward(x)));
        sup_t = std::max(sup_t, std::abs(base->forward(x)));
        const double d = std::abs(m->derivative(x) - base->derivative(x));
        ring += d * d * d * std::norm(base->inverse_derivative(z)) * r.x * r.w;
      }
      l3 += ring * t.w;
    }
    row.sup_formula = eps / scale * sup_t;
    row.l3_distance = std::cbrt(l3);

    // det D(T_eps^{-1}) = |(T_eps^{-1})'|^2 over |w| >= 1.
    for (const auto& t : periodic_nodes(q.n_theta)) {
      const Complex e{std::cos(t.x), std::sin(t.x)};
      for (int k = 0; k <= 64; ++k) {
        const double r = std::pow(10.0, 2.0 * k / 64.0);
        row.inverse_det_sup = std::max(row.inverse_det_sup, std::norm(m->inverse_derivative(r * e)));
      }
    }

    for (int i = 0; i < 64; ++i) {
      const double th = 2.0 * kPi * (i + 0.5) / 64.0;
      for (int k = 0; k <= 32; ++k) {
        const double rho = 10.0 * std::pow(10.0, k / 32.0);
        const Vec2 x = rho * Vec2{std::cos(th), std::sin(th)};
        row.growth_constant = std::max(row.growth_constant, std::abs(m->derivative(x)) / rho);
      }
    }
    rows.push_back(row);
  }
  return rows;
}

double SpatialTest::value(Vec2 x) const {
  if (constant) return 1.0;
  const double qn = norm2(x - center) / (radius * radius);
  if (qn >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - qn));
}

Vec2 SpatialTest::gradient(Vec2 x) const {
  if (constant) return {};
  const double qn = norm2(x - center) / (radius * radius);
  if (qn >= 1.0) return {};
  const double g = 1.0 - qn;
  const double v = std::exp(1.0 - 1.0 / g);
  return (-v / (g * g) * 2.0 / (radius * radius)) * (x - center);
}

SpaceTimeTest separable_test(const SpatialTest& psi, double t_stop) {
  if (!(t_stop > 0.0)) throw DomainError("separable_test: t_stop must be positive");
  auto eta = [t_stop](double t) { return 1.0 - smooth_profile(1.0 + t / t_stop); };
  auto deta = [t_stop](double t) { return -smooth_profile_derivative(1.0 + t / t_stop) / t_stop; };
  SpaceTimeTest phi;
  phi.value = [psi, eta](Vec2 x, double t) { return eta(t) * psi.value(x); };
  phi.time_derivative = [psi, deta](Vec2 x, double t) { return deta(t) * psi.value(x); };
  phi.gradient = [psi, eta](Vec2 x, double t) { return eta(t) * psi.gradient(x); };
  return phi;
}

namespace {

// Composite Simpson on uniform samples; a 3/8 panel closes an odd interval count.
double uniform_time_integral(const std::vector<double>& f, double h) {
  const std::size_t n = f.size() - 1;
  if (n == 0) return 0.0;
  if (n == 1) return 0.5 * h * (f[0] + f[1]);
  std::size_t m = n % 2 == 0 ? n : n - 3;
  double s = 0.0;
  for (std::size_t i = 0; i + 2 <= m; i += 2) s += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
  if (m != n) s += 3.0 * h / 8.0 * (f[m] + 3.0 * f[m + 1] + 3.0 * f[m + 2] + f[m + 3]);
  return s;
}

}  // namespace

double weak_residual(const Trajectory& traj, const SpaceTimeTest& phi, const InitialVorticity& omega0) {
  if (traj.positions.empty()) throw DomainError("weak_residual: empty trajectory");
  const std::size_t n = traj.times.size();
  const double h = n > 1 ? traj.times[1] - traj.times[0] : 0.0;
  for (std::size_t k = 1; k < n; ++k)
    if (std::abs(traj.times[k] - traj.times[k - 1] - h) > 1e-9 * h)
      throw DomainError("weak_residual: recorded times must be uniform");
  std::vector<double> f(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto u = traj.evaluator(k).particle_velocities();
    const double t = traj.times[k];
    double acc = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
      const Vec2 x = traj.positions[k][j];
      acc += traj.strengths[j] * (phi.time_derivative(x, t) + dot(phi.gradient(x, t), u[j]));
    }
    f[k] = acc;
  }
  double initial = 0.0;
  const auto th = periodic_nodes(256);
  for (const auto& b : omega0.bumps) {
    for (const auto& r : composite_gauss({0.0, b.radius}, b.radius / 8.0))
      for (const auto& t : th) {
        const Vec2 x = b.center + r.x * Vec2{std::cos(t.x), std::sin(t.x)};
        initial += phi.value(x, 0.0) * b.value(x) * r.x * r.w * t.w;
      }
  }
  return uniform_time_integral(f, h) + initial;
}

double moment_rate(const Trajectory& traj, const CutoffField& c, const SpatialTest& psi) {
  double rate = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto u = traj.evaluator(k).particle_velocities();
    double acc = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
      const Vec2 x = traj.positions[k][j];
      const Vec2 g = psi.value(x) * c.gradient(x) + c.value(x) * psi.gradient(x);
      acc += traj.strengths[j] * dot(g, u[j]);
    }
    rate = std::max(rate, std::abs(acc));
  }
  return rate;
}

void EpsilonSweep::validate() const {
  if (eps_values.empty()) throw DomainError("empty sweep");
  for (std::size_t i = 0; i < eps_values.size(); ++i) {
    if (!(eps_values[i] > 0.0)) throw DomainError("sweep: eps values must be positive");
    if (i > 0 && !(eps_values[i] < eps_values[i - 1])) throw DomainError("sweep: eps values must be strictly decreasing");
  }
}

}  // namespace thinflow

#include "thinflow/jump.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "thinflow/error.hpp"
#include "thinflow/quadrature.hpp"

namespace thinflow {

namespace {

constexpr double kPi = std::numbers::pi;

void check_interior(double s) {
  if (!(s > -1.0 && s < 1.0)) throw DomainError("jump: s must be interior to the slit");
}

double fit_window_distance(double s) { return 1.0 - std::abs(s); }

}  // namespace

Vec2 extrapolated_side_velocity(const VelocityEvaluator& ev, double s, Side side) {
  check_interior(s);
  const ConformalMap& m = ev.map();
  if (!m.has_slit()) throw DomainError("side velocity: map has no slit");
  const Vec2 base = m.slit_point(s);
  const Vec2 normal = perp(m.slit_tangent(s));
  const double sign = side == Side::up ? 1.0 : -1.0;
  const double scale = std::min(1.0, fit_window_distance(s) / 0.01);
  Vec2 v[3];
  for (int k = 0; k < 3; ++k) v[k] = ev.total_velocity(base + sign * scale * kTraceOffsets[k] * normal);
  // Offsets in ratio 4:2:1 remove the linear and quadratic terms.
  return (v[0] - 6.0 * v[1] + 8.0 * v[2]) / 3.0;
}

double jump_density(const VelocityEvaluator& ev, double s, TraceMethod method) {
  check_interior(s);
  const Vec2 tau = ev.map().slit_tangent(s);
  if (method == TraceMethod::exact)
    return dot(ev.side_velocity(s, Side::down) - ev.side_velocity(s, Side::up), tau);
  return dot(extrapolated_side_velocity(ev, s, Side::down) - extrapolated_side_velocity(ev, s, Side::up), tau);
}

double circulation_jump(double s) {
  check_interior(s);
  return 1.0 / (kPi * std::sqrt((1.0 - s) * (1.0 + s)));
}

JumpDensity sample_jump_density(const VelocityEvaluator& ev, std::size_t n_interior, TraceMethod method) {
  JumpDensity jd;
  std::vector<double> ss;
  for (std::size_t k = 0; k < n_interior; ++k)
    ss.push_back(std::cos(kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(n_interior)));
  for (int k = 0; k <= 24; ++k) {
    const double d = std::pow(10.0, -5.5 + 3.5 * k / 24.0);
    ss.push_back(1.0 - d);
    ss.push_back(-1.0 + d);
  }
  std::sort(ss.begin(), ss.end());
  ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
  for (double s : ss) {
    const double d = fit_window_distance(s);
    jd.samples.push_back({s, jump_density(ev, s, method), d >= 1e-5 && d <= 1e-3});
  }
  jd.endpoint_coeffs = {endpoint_coefficient(jd, -1), endpoint_coefficient(jd, +1)};
  return jd;
}

double endpoint_coefficient(const JumpDensity& jd, int which) {
  if (which != -1 && which != 1) throw DomainError("endpoint_coefficient: which must be -1 or +1");
  double n = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& p : jd.samples) {
    if (!p.in_fit_window || (p.s > 0.0) != (which > 0)) continue;
    const double c = std::sqrt((1.0 - p.s) * (1.0 + p.s));
    const double y = kPi * p.g * c;
    n += 1.0;
    sx += c;
    sy += y;
    sxx += c * c;
    sxy += c * y;
  }
  if (n < 3.0) throw DomainError("endpoint_coefficient: insufficient samples near the endpoint");
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return (sy - slope * sx) / n;
}

double jump_mass(const VelocityEvaluator& ev, std::size_t panels) {
  double total = 0.0;
  for (const auto& t : composite_gauss({0.0, kPi}, kPi / static_cast<double>(panels)))
    total += jump_density(ev, std::cos(t.x), TraceMethod::exact) * std::sin(t.x) * t.w;
  return total;
}

double vorticity_mass(const VelocityEvaluator& ev, std::size_t n_theta, double max_panel) {
  // r = 1/q maps |z| >= 1 onto q in (0,1]; dz = q^{-3} dq dtheta.
  const auto qn = composite_gauss({0.0, 1.0}, max_panel);
  double total = 0.0;
  for (const auto& t : periodic_nodes(n_theta)) {
    const Complex e{std::cos(t.x), std::sin(t.x)};
    double ring = 0.0;
    for (const auto& q : qn) ring += ev.mapped_vorticity(e / q.x) * q.w / (q.x * q.x * q.x);
    total += ring * t.w;
  }
  return total;
}

double PairingTerms::scale() const {
  const double s = std::max({std::abs(curl_pairing), std::abs(vorticity), std::abs(layer)});
  return s > 0.0 ? s : 1.0;
}

namespace {

double outer_radius(const ConformalMap& m, const std::vector<SpatialTest>& tests) {
  double reach = 0.0;
  for (const auto& t : tests) {
    if (t.constant) throw DomainError("pairing: test functions must be compactly supported");
    reach = std::max(reach, norm(t.center) + t.radius);
  }
  double r = 1.0;
  for (const auto& th : periodic_nodes(256)) r = std::max(r, window_radius(m, th.x, reach));
  return r * 1.01;
}

}  // namespace

std::vector<PairingTerms> distributional_curl_check(const VelocityEvaluator& ev, const std::vector<SpatialTest>& tests,
                                                    const PairingGrid& grid) {
  const ConformalMap& m = ev.map();
  if (!m.has_slit()) throw DomainError("pairing: map has no slit");
  std::vector<PairingTerms> out(tests.size());
  if (tests.empty()) return out;
  const double rmax = outer_radius(m, tests);
  const auto rn = midpoint_nodes(1.0, rmax, grid.n_r);
  const auto tn = periodic_nodes(grid.n_theta);
  const Complex i{0.0, 1.0};
  for (const auto& t : tn) {
    const Complex e{std::cos(t.x), std::sin(t.x)};
    for (const auto& r : rn) {
      const Complex z = r.x * e;
      const Vec2 x = m.inverse(z);
      const double w = r.x * r.w * t.w;
      bool needed = false;
      for (const auto& p : tests) needed = needed || norm2(x - p.center) < p.radius * p.radius;
      if (!needed) continue;
      const Complex b = ev.mapped_field(z);
      const double om = ev.mapped_vorticity(z);
      const Complex jinv = std::conj(m.inverse_derivative(z));
      for (std::size_t k = 0; k < tests.size(); ++k) {
        const double phi = tests[k].value(x);
        const Vec2 g = tests[k].gradient(x);
        if (phi == 0.0 && g == Vec2{}) continue;
        // u . v dx = Re(conj(B) v conj((T^{-1})')) / (2 pi) dz for a vector v at x.
        const Complex gz = to_complex(g) * jinv;
        out[k].curl_pairing -= (std::conj(b) * i * gz).real() / (2.0 * kPi) * w;
        out[k].divergence += (std::conj(b) * gz).real() / (2.0 * kPi) * w;
        out[k].vorticity += phi * om * w;
      }
    }
  }
  // Layer term on the slit with s = cos(theta).
  for (const auto& t : composite_gauss({0.0, kPi}, kPi / 32.0)) {
    const double s = std::cos(t.x);
    const double g = jump_density(ev, s, TraceMethod::exact);
    const Vec2 x = m.slit_point(s);
    for (std::size_t k = 0; k < tests.size(); ++k) out[k].layer += tests[k].value(x) * g * std::sin(t.x) * t.w;
  }
  for (auto& p : out) p.residual = p.curl_pairing - p.vorticity - p.layer;
  return out;
}

double divergence_free_check(const VelocityEvaluator& ev, const SpatialTest& phi, const PairingGrid& grid) {
  return distributional_curl_check(ev, {phi}, grid).front().divergence;
}

}  // namespace thinflow

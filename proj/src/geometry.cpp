#include "thinflow/geometry.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <string>

#include "thinflow/error.hpp"

namespace thinflow {

namespace {

double point_chord_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double t = std::clamp(dot(p - a, d) / norm2(d), 0.0, 1.0);
  return norm(p - (a + t * d));
}

double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

double chord_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return 0.0;
  return std::min({point_chord_distance(a, c, d), point_chord_distance(b, c, d), point_chord_distance(c, a, b),
                   point_chord_distance(d, a, b)});
}

}  // namespace

JordanArc::JordanArc(Param param, Param derivative, double min_separation, int samples)
    : param_(std::move(param)), derivative_(std::move(derivative)) {
  if (!param_ || !derivative_) throw DomainError("arc: empty parametrization");
  if (samples < 4) throw DomainError("arc: need at least 4 validation samples");
  std::vector<Vec2> pts(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    const double t = static_cast<double>(i) / samples;
    pts[i] = param_(t);
    const Vec2 d = derivative_(t);
    if (!is_finite(pts[i]) || !is_finite(d))
      throw DomainError("arc: non-finite sample at t=" + std::to_string(t));
    if (norm(d) == 0.0) throw DomainError("arc: vanishing derivative at t=" + std::to_string(t));
  }
  // Non-adjacent chords of the sampled polyline must stay apart.
  for (int i = 0; i < samples; ++i)
    for (int j = i + 2; j < samples; ++j)
      if (chord_distance(pts[i], pts[i + 1], pts[j], pts[j + 1]) < min_separation)
        throw DomainError("arc: self-intersection near t=" + std::to_string(double(i) / samples) +
                          " and t=" + std::to_string(double(j) / samples));
}

Vec2 JordanArc::operator()(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("arc: parameter outside [0,1]");
  return param_(t);
}

Vec2 JordanArc::derivative(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("arc: parameter outside [0,1]");
  return derivative_(t);
}

Frame tangent_normal(const JordanArc& arc, double t) {
  const Vec2 d = arc.derivative(t);
  const Vec2 tau = d / norm(d);
  return {tau, perp(tau)};
}

double arclength(const JordanArc& arc, double t0, double t1) {
  if (!(t0 >= 0.0 && t1 <= 1.0 && t0 <= t1)) throw DomainError("arclength: bad parameter range");
  if (t0 == t1) return 0.0;
  auto speed = [&](double t) { return norm(arc.derivative(t)); };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(speed, t0, t1, 20, 1e-13);
}

Vec2 position(const JordanArc& arc, const SidePoint& p) {
  if (!(p.s > -1.0 && p.s < 1.0)) throw DomainError("side point: coordinate must lie in (-1,1)");
  if (!(p.offset >= 0.0)) throw DomainError("side point: offset must be nonnegative");
  const double t = 0.5 * (p.s + 1.0);
  const Frame f = tangent_normal(arc, t);
  const double sign = p.side == Side::up ? 1.0 : -1.0;
  return arc(t) + sign * p.offset * f.normal;
}

JordanArc segment_arc() {
  return JordanArc([](double t) { return Vec2{2.0 * t - 1.0, 0.0}; },
                   [](double) { return Vec2{2.0, 0.0}; });
}

JordanArc sampled_arc(std::vector<Vec2> points, double min_separation) {
  if (points.size() < 2) throw DomainError("sampled arc: need at least two points");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (norm(points[i] - points[i - 1]) == 0.0) throw DomainError("sampled arc: repeated point");
  const auto n = static_cast<double>(points.size() - 1);
  auto locate = [n](double t) {
    const double u = std::min(t * n, n - 1e-15);
    const auto k = static_cast<std::size_t>(std::floor(std::max(u, 0.0)));
    return std::pair<std::size_t, double>{k, u - static_cast<double>(k)};
  };
  auto param = [points, locate](double t) {
    auto [k, f] = locate(t);
    return points[k] + f * (points[k + 1] - points[k]);
  };
  auto deriv = [points, locate, n](double t) {
    auto [k, f] = locate(t);
    (void)f;
    return n * (points[k + 1] - points[k]);
  };
  const int samples = static_cast<int>(std::max<std::size_t>(4 * (points.size() - 1), 64));
  return JordanArc(param, deriv, min_separation, samples);
}

}  // namespace thinflow

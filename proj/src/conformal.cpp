#include "thinflow/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "thinflow/error.hpp"

namespace thinflow {

std::string to_string(DomainTag tag) {
  switch (tag) {
    case DomainTag::segment_exterior: return "segment_exterior";
    case DomainTag::epsilon_obstacle: return "epsilon_obstacle";
    case DomainTag::unit_disk_exterior: return "unit_disk_exterior";
  }
  return "unknown";
}

bool ConformalMap::on_slit(Vec2) const { return false; }

Complex ConformalMap::side_forward(double, Side) const {
  throw DomainError("map has no slit: " + to_string(domain_tag()));
}

Complex ConformalMap::side_derivative(double, Side) const {
  throw DomainError("map has no slit: " + to_string(domain_tag()));
}

Vec2 ConformalMap::slit_point(double) const {
  throw DomainError("map has no slit: " + to_string(domain_tag()));
}

Vec2 ConformalMap::slit_tangent(double) const {
  throw DomainError("map has no slit: " + to_string(domain_tag()));
}

bool ConformalMap::crosses_slit(Vec2, Vec2) const { return false; }

bool ConformalMap::in_domain(Vec2 x) const {
  if (!is_finite(x) || on_slit(x)) return false;
  return std::abs(forward(x)) >= 1.0;
}

Complex principal_sqrt(Complex w) {
  if (w.imag() == 0.0) {
    if (w.real() >= 0.0) return {std::sqrt(w.real()), 0.0};
    return {0.0, std::sqrt(-w.real())};
  }
  return std::sqrt(w);
}

Complex joukowski(Complex z) {
  if (z == Complex{0.0, 0.0}) throw DomainError("joukowski: z = 0");
  return 0.5 * (z + 1.0 / z);
}

namespace {

// Unit-circle points built from cos/sin can land an ulp inside.
constexpr double kInverseSlack = 1e-12;

void check_point(Vec2 x) {
  if (!is_finite(x)) throw DomainError("segment map: non-finite point");
}

bool near_segment(Vec2 x) {
  const double cx = std::clamp(x.x, -1.0, 1.0);
  return std::hypot(x.x - cx, x.y) <= kCutTolerance;
}

Branch branch_of(Vec2 x) {
  if (x.x > 0.0 || (x.x == 0.0 && x.y > 0.0)) return Branch::plus;
  return Branch::minus;
}

// sqrt(x^2 - 1) computed as sqrt((x-1)(x+1)).
Complex root_term(Complex z) { return principal_sqrt((z - 1.0) * (z + 1.0)); }

void check_side_coordinate(double s) {
  if (!(s > -1.0 && s < 1.0)) throw DomainError("slit coordinate must lie in (-1,1)");
}

class SegmentMap final : public ConformalMap {
 public:
  Complex forward(Vec2 x) const override { return segment_exterior_map(x).value; }
  Complex derivative(Vec2 x) const override { return segment_map_complex_derivative(x); }

  Vec2 inverse(Complex z) const override {
    if (!(std::abs(z) >= 1.0 - kInverseSlack)) throw DomainError("segment map inverse: |z| < 1");
    return to_vec(joukowski(z));
  }

  Complex inverse_derivative(Complex z) const override {
    if (!(std::abs(z) >= 1.0 - kInverseSlack)) throw DomainError("segment map inverse: |z| < 1");
    return 0.5 * (1.0 - 1.0 / (z * z));
  }

  DomainTag domain_tag() const override { return DomainTag::segment_exterior; }
  bool has_slit() const override { return true; }
  bool on_slit(Vec2 x) const override { return near_segment(x); }
  Complex side_forward(double s, Side side) const override { return side_limit_map(s, side); }
  Complex side_derivative(double s, Side side) const override { return side_limit_derivative(s, side); }

  Vec2 slit_point(double s) const override {
    check_side_coordinate(s);
    return {s, 0.0};
  }

  Vec2 slit_tangent(double) const override { return {1.0, 0.0}; }

  bool crosses_slit(Vec2 a, Vec2 b) const override {
    if (near_segment(a) || near_segment(b)) return true;
    if ((a.y > 0.0 && b.y > 0.0) || (a.y < 0.0 && b.y < 0.0)) return false;
    if (a.y == b.y) return false;  // both on the real axis off the slit
    const double f = a.y / (a.y - b.y);
    const double xc = a.x + f * (b.x - a.x);
    return xc >= -1.0 && xc <= 1.0;
  }
};

class DiskMap final : public ConformalMap {
 public:
  Complex forward(Vec2 x) const override {
    check_point(x);
    return to_complex(x);
  }
  Complex derivative(Vec2 x) const override {
    check_point(x);
    return {1.0, 0.0};
  }
  Vec2 inverse(Complex z) const override {
    if (!(std::abs(z) >= 1.0 - kInverseSlack)) throw DomainError("disk map inverse: |z| < 1");
    return to_vec(z);
  }
  Complex inverse_derivative(Complex) const override { return {1.0, 0.0}; }
  DomainTag domain_tag() const override { return DomainTag::unit_disk_exterior; }
};

class EpsilonMap final : public ConformalMap {
 public:
  EpsilonMap(MapPtr base, double eps) : base_(std::move(base)), eps_(eps), scale_(1.0 + eps) {}

  // Points on the base slit sit strictly inside the obstacle.
  Complex forward(Vec2 x) const override {
    if (base_->on_slit(x)) return Complex{0.0, 0.0};
    return base_->forward(x) / scale_;
  }
  Complex derivative(Vec2 x) const override { return base_->derivative(x) / scale_; }
  Vec2 inverse(Complex z) const override {
    if (!(std::abs(z) >= 1.0 - kInverseSlack)) throw DomainError("epsilon map inverse: |z| < 1");
    return base_->inverse(scale_ * z);
  }
  Complex inverse_derivative(Complex z) const override {
    if (!(std::abs(z) >= 1.0 - kInverseSlack)) throw DomainError("epsilon map inverse: |z| < 1");
    return scale_ * base_->inverse_derivative(scale_ * z);
  }
  DomainTag domain_tag() const override { return DomainTag::epsilon_obstacle; }
  double epsilon() const override { return eps_; }

 private:
  MapPtr base_;
  double eps_;
  double scale_;
};

}  // namespace

BranchedValue segment_exterior_map(Vec2 x) {
  check_point(x);
  if (near_segment(x)) throw DomainError("segment map: point on the slit");
  const Complex z = to_complex(x);
  const Complex r = root_term(z);
  const Branch b = branch_of(x);
  return {b == Branch::plus ? z + r : z - r, b};
}

Complex segment_map_complex_derivative(Vec2 x) {
  check_point(x);
  if (near_segment(x)) throw DomainError("segment map derivative: point on the slit");
  const Complex z = to_complex(x);
  const Complex q = z / root_term(z);
  return branch_of(x) == Branch::plus ? 1.0 + q : 1.0 - q;
}

Mat2 segment_map_derivative(Vec2 x) { return jacobian_of(segment_map_complex_derivative(x)); }

Complex side_limit_map(double s, Side side) {
  check_side_coordinate(s);
  const double c = std::sqrt((1.0 - s) * (1.0 + s));
  return side == Side::up ? Complex{s, c} : Complex{s, -c};
}

Complex side_limit_derivative(double s, Side side) {
  check_side_coordinate(s);
  const double c = std::sqrt((1.0 - s) * (1.0 + s));
  return side == Side::up ? Complex{1.0, -s / c} : Complex{1.0, s / c};
}

MapPtr segment_map() { return std::make_shared<SegmentMap>(); }

MapPtr disk_identity_map() { return std::make_shared<DiskMap>(); }

MapPtr epsilon_map(MapPtr base, double eps) {
  if (!base) throw DomainError("epsilon map: null base map");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("epsilon map: eps must be positive");
  return std::make_shared<EpsilonMap>(std::move(base), eps);
}

double segment_level_area(double r) {
  if (!(r >= 1.0)) throw DomainError("level area: r < 1");
  return 0.25 * std::numbers::pi * (r * r - 1.0 / (r * r));
}

}  // namespace thinflow

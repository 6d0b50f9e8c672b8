#pragma once

#include <memory>
#include <string>

#include "thinflow/geometry.hpp"
#include "thinflow/vec2.hpp"

namespace thinflow {

enum class DomainTag { segment_exterior, epsilon_obstacle, unit_disk_exterior };

std::string to_string(DomainTag tag);

// Distance below which a point counts as lying on the slit.
inline constexpr double kCutTolerance = 1e-12;

// Biholomorphism T from a planar exterior domain onto {|z| > 1} with T(inf) = inf.
class ConformalMap {
 public:
  virtual ~ConformalMap() = default;

  virtual Complex forward(Vec2 x) const = 0;
  // Complex derivative T'(x).
  virtual Complex derivative(Vec2 x) const = 0;
  virtual Vec2 inverse(Complex z) const = 0;
  // (T^{-1})'(z).
  virtual Complex inverse_derivative(Complex z) const = 0;
  virtual DomainTag domain_tag() const = 0;
  virtual double epsilon() const { return 0.0; }

  // Maps whose removed set is a slit expose one-sided boundary traces.
  virtual bool has_slit() const { return false; }
  virtual bool on_slit(Vec2 x) const;
  virtual Complex side_forward(double s, Side side) const;
  virtual Complex side_derivative(double s, Side side) const;
  virtual Vec2 slit_point(double s) const;
  virtual Vec2 slit_tangent(double s) const;
  // True if the straight path a -> b meets the slit.
  virtual bool crosses_slit(Vec2 a, Vec2 b) const;

  // Derived quantities.
  Mat2 jacobian(Vec2 x) const { return jacobian_of(derivative(x)); }
  double jac_det(Vec2 x) const { return std::norm(derivative(x)); }
  // Boundary modulus: 1 for the unit-circle target.
  bool in_domain(Vec2 x) const;
};

using MapPtr = std::shared_ptr<const ConformalMap>;

// Principal square root with arg in (-pi, pi]; negative reals map to +i sqrt(|x|)
// regardless of the sign of the zero imaginary part.
Complex principal_sqrt(Complex w);

// Joukowski map G(z) = (z + 1/z) / 2.
Complex joukowski(Complex z);

enum class Branch { plus, minus };

struct BranchedValue {
  Complex value;
  Branch branch;
};

// Inverse Joukowski branch selection for the slit [-1,1].
BranchedValue segment_exterior_map(Vec2 x);
Complex segment_map_complex_derivative(Vec2 x);
Mat2 segment_map_derivative(Vec2 x);
// Boundary value of T from the given side at coordinate s in (-1,1).
Complex side_limit_map(double s, Side side);
Complex side_limit_derivative(double s, Side side);

MapPtr segment_map();
MapPtr disk_identity_map();
// T_eps = T / (1 + eps); the domain is the exterior of the level set |T| = 1 + eps.
MapPtr epsilon_map(MapPtr base, double eps);

// Area enclosed by |T| = r for the segment map.
double segment_level_area(double r);

}  // namespace thinflow

#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "thinflow/vec2.hpp"

namespace thinflow {

enum class Side { up, down };

inline const char* to_string(Side s) { return s == Side::up ? "up" : "down"; }

// C^{1,1} Jordan arc parametrized on t in [0,1]. The curve coordinate
// s = 2t - 1 in [-1,1] is used by the trace and jump routines.
class JordanArc {
 public:
  using Param = std::function<Vec2(double)>;

  // Validates finiteness, nonvanishing derivative and injectivity on a sample set:
  // non-adjacent chords of the sampled polyline must stay at least min_separation apart.
  JordanArc(Param param, Param derivative, double min_separation = 1e-9, int samples = 1024);

  Vec2 operator()(double t) const;
  Vec2 derivative(double t) const;
  Vec2 at_coordinate(double s) const { return (*this)(0.5 * (s + 1.0)); }
  std::pair<Vec2, Vec2> endpoints() const { return {(*this)(0.0), (*this)(1.0)}; }

 private:
  Param param_;
  Param derivative_;
};

struct Frame {
  Vec2 tangent;
  Vec2 normal;  // tangent rotated by +pi/2, the "up" side
};

Frame tangent_normal(const JordanArc& arc, double t);
double arclength(const JordanArc& arc, double t0 = 0.0, double t1 = 1.0);

// Point at distance offset from the arc on the requested side, at curve coordinate s.
struct SidePoint {
  double s = 0.0;
  Side side = Side::up;
  double offset = 0.0;
};

Vec2 position(const JordanArc& arc, const SidePoint& p);

// The reference slit [-1,1] x {0}.
JordanArc segment_arc();
// Piecewise-linear arc through the points, parametrized uniformly by t.
JordanArc sampled_arc(std::vector<Vec2> points, double min_separation = 1e-9);

}  // namespace thinflow

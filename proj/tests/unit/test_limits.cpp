#include <doctest.h>

#include <cmath>

#include "thinflow/error.hpp"
#include "thinflow/limits.hpp"

using namespace thinflow;

namespace {

InitialVorticity bump() { return {{{{0.3, 1.1}, 0.5, 2.0}}}; }

VorticitySample zero_sample() {
  VorticitySample s = discretize(bump(), 0.1);
  for (auto& g : s.strengths) g = 0.0;
  return s;
}

}  // namespace

TEST_SUITE("limits") {
  TEST_CASE("smooth profile") {
    CHECK(smooth_profile(0.5) == 0.0);
    CHECK(smooth_profile(1.0) == 0.0);
    CHECK(smooth_profile(2.0) == 1.0);
    CHECK(smooth_profile(3.0) == 1.0);
    CHECK(smooth_profile(1.5) == doctest::Approx(0.5));
    double prev = 0.0;
    for (int k = 1; k < 100; ++k) {
      const double s = 1.0 + k / 100.0;
      CHECK(smooth_profile(s) >= prev);
      prev = smooth_profile(s);
      const double fd = (smooth_profile(s + 1e-6) - smooth_profile(s - 1e-6)) / 2e-6;
      CHECK(smooth_profile_derivative(s) == doctest::Approx(fd).epsilon(1e-5));
    }
  }

  TEST_CASE("cutoff values and gradient") {
    const CutoffField c(epsilon_map(segment_map(), 0.1));
    CHECK(c.eps() == doctest::Approx(0.1));
    CHECK(c.value({0.0, 0.0}) == 0.0);
    CHECK(c.value({5.0, 5.0}) == 1.0);
    CHECK(c.value({1.5, 0.0}) == 1.0);
    int in_layer = 0;
    for (double y : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}) {
      const Vec2 x{0.2, y};
      const double v = c.value(x);
      if (v <= 0.0 || v >= 1.0) continue;
      ++in_layer;
      const double h = 1e-6;
      const Vec2 fd{(c.value({x.x + h, x.y}) - c.value({x.x - h, x.y})) / (2 * h),
                    (c.value({x.x, x.y + h}) - c.value({x.x, x.y - h})) / (2 * h)};
      const Vec2 g = c.gradient(x);
      CHECK(norm(g - fd) <= 1e-5 * (1.0 + norm(g)));
      // The harmonic field is tangent to the level sets of the cutoff.
      CHECK(std::abs(dot(harmonic_field(*c.map(), x), g)) <= 1e-10 * (1.0 + norm(g)));
    }
    CHECK(in_layer > 0);
  }

  TEST_CASE("window radius and transition measure") {
    CHECK(window_radius(*disk_identity_map(), 0.3, 2.0) == doctest::Approx(2.0).epsilon(1e-10));
    for (double eps : {0.1, 0.05}) {
      const double m = transition_measure(CutoffField(epsilon_map(segment_map(), eps)));
      CHECK(m / eps > 4.0);
      CHECK(m / eps < 9.0);
    }
  }

  TEST_CASE("flux vanishes without vorticity") {
    const MapPtr m = epsilon_map(segment_map(), 0.1);
    const VelocityEvaluator ev(m, zero_sample(), 1.0);
    CHECK(flux_norm(ev, CutoffField(m)) < 1e-10);
  }

  TEST_CASE("flux decreases with eps") {
    const VorticitySample s = discretize(bump(), 0.1);
    double prev = 1e300;
    for (double eps : {0.2, 0.1, 0.05}) {
      const MapPtr m = epsilon_map(segment_map(), eps);
      const double f = flux_norm(VelocityEvaluator(m, s, 1.0), CutoffField(m));
      CHECK(f < prev);
      prev = f;
    }
  }

  TEST_CASE("velocity error is small for tiny eps") {
    const VorticitySample s = discretize(bump(), 0.1);
    const VelocityEvaluator limit(segment_map(), s, 1.0);
    const double small = l2loc_velocity_error(VelocityEvaluator(epsilon_map(segment_map(), 1e-6), s, 1.0), limit, 3.0);
    const double coarse = l2loc_velocity_error(VelocityEvaluator(epsilon_map(segment_map(), 0.1), s, 1.0), limit, 3.0);
    CHECK(small < 1e-2);
    CHECK(small < 0.1 * coarse);
    CHECK(extension_consistency(VelocityEvaluator(epsilon_map(segment_map(), 0.1), s, 1.0)) > 0.0);
  }

  TEST_CASE("family report") {
    const auto rows = family_report({0.2, 0.1, 0.05}, segment_map(), 3.0);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].sup_distance <= rows[i].sup_formula * (1.0 + 1e-9));
      CHECK(rows[i].inverse_det_sup >= 1.0);
      CHECK(std::isfinite(rows[i].growth_constant));
      if (i > 0) {
        CHECK(rows[i].l3_distance < rows[i - 1].l3_distance);
        CHECK(rows[i].inverse_det_sup <= rows[i - 1].inverse_det_sup);
      }
    }
  }

  TEST_CASE("spatial test functions") {
    const SpatialTest psi{{1.0, 1.0}, 0.5};
    CHECK(psi.value({1.0, 1.0}) == doctest::Approx(1.0));
    CHECK(psi.value({1.6, 1.0}) == 0.0);
    const Vec2 x{1.2, 0.9};
    const double h = 1e-6;
    const Vec2 fd{(psi.value({x.x + h, x.y}) - psi.value({x.x - h, x.y})) / (2 * h),
                  (psi.value({x.x, x.y + h}) - psi.value({x.x, x.y - h})) / (2 * h)};
    CHECK(norm(psi.gradient(x) - fd) < 1e-6);
    const SpatialTest one{{0, 0}, 1.0, true};
    CHECK(one.value({7, 7}) == 1.0);
    CHECK(norm(one.gradient({7, 7})) == 0.0);
    CHECK_THROWS_AS(separable_test(psi, 0.0), DomainError);
  }

  TEST_CASE("weak residual") {
    const InitialVorticity iv = bump();
    const VorticitySample s = discretize(iv, 0.05);
    const Trajectory tr = run(FlowConfig{1.0, s}, epsilon_map(segment_map(), 0.1), 0.5, 0.01);
    SpaceTimeTest zero;
    zero.value = [](Vec2, double) { return 0.0; };
    zero.time_derivative = [](Vec2, double) { return 0.0; };
    zero.gradient = [](Vec2, double) { return Vec2{0.0, 0.0}; };
    CHECK(weak_residual(tr, zero, iv) == 0.0);
    // Constant in space: only the discretization error of the total strength remains.
    const double r = weak_residual(tr, separable_test({{0, 0}, 1.0, true}, 0.4), iv);
    CHECK(std::abs(r) <= 1e-3 * iv.total());
    const double rb = weak_residual(tr, separable_test({{0.3, 1.1}, 0.8}, 0.4), iv);
    CHECK(std::abs(rb) <= 1e-2 * iv.total());
  }

  TEST_CASE("moment rate is finite") {
    const VorticitySample s = discretize(bump(), 0.1);
    const MapPtr m = epsilon_map(segment_map(), 0.1);
    const Trajectory tr = run(FlowConfig{1.0, s}, m, 0.2, 0.02);
    const double rate = moment_rate(tr, CutoffField(m), {{0.3, 1.1}, 1.0});
    CHECK(std::isfinite(rate));
    CHECK(rate >= 0.0);
  }

  TEST_CASE("sweep validation") {
    CHECK_THROWS_WITH_AS(EpsilonSweep{}.validate(), "empty sweep", DomainError);
    CHECK_THROWS_AS((EpsilonSweep{{0.1, 0.2}}.validate()), DomainError);
    CHECK_THROWS_AS((EpsilonSweep{{0.1, -0.1}}.validate()), DomainError);
    CHECK_NOTHROW((EpsilonSweep{{0.2, 0.1}}.validate()));
  }
}

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "thinflow/fit.hpp"
#include "thinflow/jump.hpp"

using namespace thinflow;

namespace {

constexpr double kPi = std::numbers::pi;

VorticitySample cluster(double scale = 1.0) {
  VorticitySample s;
  s.blob_radius = 0.1;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      s.positions.push_back({0.3 + 0.08 * i, 1.0 + 0.08 * j});
      s.strengths.push_back(scale * 0.01 * (1 + i + j));
    }
  return s;
}

}  // namespace

TEST_SUITE("jump") {
  TEST_CASE("zero flow has no jump") {
    const VelocityEvaluator ev(segment_map(), cluster(0.0), 0.0);
    for (double s : {-0.9, -0.3, 0.0, 0.5, 0.99}) {
      CHECK(jump_density(ev, s) == 0.0);
      CHECK(jump_density(ev, s, TraceMethod::exact) == 0.0);
    }
    CHECK(jump_mass(ev) == 0.0);
  }

  TEST_CASE("pure circulation") {
    const VelocityEvaluator ev(segment_map(), cluster(0.0), 1.0);
    CHECK(circulation_jump(0.0) == doctest::Approx(1.0 / kPi));
    for (double s : {-0.999, -0.5, 0.0, 0.25, 0.9}) {
      CHECK(jump_density(ev, s, TraceMethod::exact) == doctest::Approx(circulation_jump(s)).epsilon(1e-12));
      CHECK(std::abs(jump_density(ev, s) - circulation_jump(s)) <= 1e-6 * circulation_jump(s));
    }
    CHECK(jump_mass(ev) == doctest::Approx(1.0).epsilon(1e-10));
    const JumpDensity jd = sample_jump_density(ev);
    CHECK(endpoint_coefficient(jd, -1) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(endpoint_coefficient(jd, 1) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(jd.endpoint_coeffs[1] == doctest::Approx(1.0).epsilon(1e-4));
  }

  TEST_CASE("inverse square-root blow-up at the endpoints") {
    const VelocityEvaluator ev(segment_map(), cluster(), 3.0);
    const JumpDensity jd = sample_jump_density(ev);
    std::vector<std::pair<double, double>> right, left;
    for (const auto& p : jd.samples) {
      if (!p.in_fit_window) continue;
      if (p.s > 0) right.push_back({1.0 - p.s, std::abs(p.g)});
      else left.push_back({1.0 + p.s, std::abs(p.g)});
    }
    REQUIRE(right.size() >= 3);
    REQUIRE(left.size() >= 3);
    CHECK(std::abs(fit_exponent(right).exponent + 0.5) < 0.01);
    CHECK(std::abs(fit_exponent(left).exponent + 0.5) < 0.01);
  }

  TEST_CASE("traces agree") {
    const VelocityEvaluator ev(segment_map(), cluster(), 1.2);
    for (double s : {-0.8, -0.2, 0.35, 0.7}) {
      const double exact = jump_density(ev, s, TraceMethod::exact);
      CHECK(std::abs(jump_density(ev, s) - exact) <= 1e-8 * (1.0 + std::abs(exact)));
      const Vec2 up = extrapolated_side_velocity(ev, s, Side::up);
      CHECK(norm(up - ev.side_velocity(s, Side::up)) <= 1e-8 * (1.0 + norm(up)));
    }
  }

  TEST_CASE("stokes balance") {
    const VorticitySample s = cluster();
    const double alpha = 1.0 + s.total_strength();
    const VelocityEvaluator ev(segment_map(), s, alpha);
    CHECK(jump_mass(ev) + vorticity_mass(ev) == doctest::Approx(alpha).epsilon(1e-6));
  }

  TEST_CASE("distributional curl and divergence") {
    const VelocityEvaluator ev(segment_map(), cluster(), 1.2);
    const std::vector<SpatialTest> tests{{{0.0, 0.0}, 1.5}, {{0.8, 0.2}, 0.6}};
    const auto terms = distributional_curl_check(ev, tests, {256, 512});
    REQUIRE(terms.size() == 2);
    for (const auto& t : terms) {
      CHECK(t.scale() > 0.0);
      CHECK(std::abs(t.relative()) < 1e-3);
      CHECK(std::abs(t.divergence) < 1e-3 * t.scale());
    }
    // A test function centred on the slit sees the layer.
    CHECK(std::abs(terms[0].layer) > 1e-3);
    CHECK(std::abs(divergence_free_check(ev, tests[1], {256, 512})) < 1e-3);
  }
}

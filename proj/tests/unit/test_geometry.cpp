#include <doctest.h>

#include <cmath>
#include <numbers>

#include "thinflow/error.hpp"
#include "thinflow/geometry.hpp"

using namespace thinflow;

namespace {

JordanArc half_circle() {
  const double pi = std::numbers::pi;
  return JordanArc([pi](double t) { return Vec2{std::cos(pi * t), std::sin(pi * t)}; },
                   [pi](double t) { return Vec2{-pi * std::sin(pi * t), pi * std::cos(pi * t)}; });
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("segment arclength") {
    const JordanArc seg = segment_arc();
    CHECK(arclength(seg, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(arclength(seg, 0.0, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(arclength(seg, 0.3, 0.3) == 0.0);
  }

  TEST_CASE("half circle arclength and additivity") {
    const JordanArc arc = half_circle();
    CHECK(std::abs(arclength(arc) - std::numbers::pi) < 1e-8);
    for (double b : {0.1, 0.37, 0.8}) {
      const double whole = arclength(arc, 0.05, 0.95);
      CHECK(std::abs(arclength(arc, 0.05, b) + arclength(arc, b, 0.95) - whole) < 1e-10);
    }
  }

  TEST_CASE("tangent and normal are orthonormal") {
    const JordanArc arc = half_circle();
    for (int k = 0; k <= 20; ++k) {
      const Frame f = tangent_normal(arc, k / 20.0);
      CHECK(std::abs(norm(f.tangent) - 1.0) < 1e-14);
      CHECK(std::abs(norm(f.normal) - 1.0) < 1e-14);
      CHECK(std::abs(dot(f.tangent, f.normal)) < 1e-14);
    }
    const Frame f = tangent_normal(segment_arc(), 0.5);
    CHECK(f.tangent == Vec2{1.0, 0.0});
    CHECK(f.normal == Vec2{0.0, 1.0});
  }

  TEST_CASE("endpoints and side points") {
    const auto [a, b] = segment_arc().endpoints();
    CHECK(a == Vec2{-1.0, 0.0});
    CHECK(b == Vec2{1.0, 0.0});
    const JordanArc seg = segment_arc();
    const Vec2 up = position(seg, {0.5, Side::up, 0.1});
    const Vec2 down = position(seg, {0.5, Side::down, 0.1});
    CHECK(up.x == doctest::Approx(0.5));
    CHECK(up.y == doctest::Approx(0.1));
    CHECK(down.y == doctest::Approx(-0.1));
    CHECK_THROWS_AS(position(seg, {1.0, Side::up, 0.1}), DomainError);
  }

  TEST_CASE("self-intersecting arc is rejected") {
    // Figure-eight traced twice over the parameter range.
    auto p = [](double t) { return Vec2{std::sin(4 * std::numbers::pi * t), std::sin(2 * std::numbers::pi * t)}; };
    auto d = [](double t) {
      return Vec2{4 * std::numbers::pi * std::cos(4 * std::numbers::pi * t),
                  2 * std::numbers::pi * std::cos(2 * std::numbers::pi * t)};
    };
    CHECK_THROWS_AS(JordanArc(p, d), DomainError);
  }

  TEST_CASE("non-finite and degenerate arcs are rejected") {
    CHECK_THROWS_AS(JordanArc([](double) { return Vec2{NAN, 0.0}; }, [](double) { return Vec2{1.0, 0.0}; }), DomainError);
    CHECK_THROWS_AS(JordanArc([](double t) { return Vec2{t, 0.0}; }, [](double) { return Vec2{0.0, 0.0}; }), DomainError);
  }

  TEST_CASE("sampled arc") {
    const JordanArc arc = sampled_arc({{0, 0}, {1, 0}, {1, 1}});
    CHECK(arclength(arc) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(norm(arc(0.5) - Vec2{1.0, 0.0}) < 1e-12);
    CHECK_THROWS_AS(sampled_arc({{0, 0}}), DomainError);
    CHECK_THROWS_AS(sampled_arc({{0, 0}, {1, 0}, {0, 0}, {1, 0}}), DomainError);
  }
}

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "thinflow/conformal.hpp"
#include "thinflow/error.hpp"
#include "thinflow/fit.hpp"

using namespace thinflow;

namespace {

bool close(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

Vec2 random_exterior(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (;;) {
    const Vec2 x{u(rng), u(rng)};
    if (std::abs(x.y) > 1e-3 || std::abs(x.x) > 1.0 + 1e-3) return x;
  }
}

}  // namespace

TEST_SUITE("conformal") {
  TEST_CASE("joukowski values") {
    CHECK(close(joukowski(2.0), 1.25, 1e-15));
    CHECK(close(joukowski({0.0, 1.0}), 0.0, 1e-15));
    const double t = std::numbers::pi / 3;
    CHECK(close(joukowski(std::polar(1.0, t)), 0.5, 1e-15));
    CHECK_THROWS_AS(joukowski(0.0), DomainError);
  }

  TEST_CASE("joukowski symmetry under inversion") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 100; ++k) {
      const Complex z{u(rng), u(rng)};
      CHECK(close(joukowski(z), joukowski(1.0 / z), 1e-12 * (1.0 + std::abs(z) + 1.0 / std::abs(z))));
    }
  }

  TEST_CASE("principal square root branch") {
    CHECK(close(principal_sqrt({-4.0, 0.0}), {0.0, 2.0}, 0.0));
    CHECK(close(principal_sqrt({-4.0, -0.0}), {0.0, 2.0}, 0.0));
    CHECK(close(principal_sqrt({0.0, 2.0}), {1.0, 1.0}, 1e-15));
  }

  TEST_CASE("segment exterior map examples") {
    auto a = segment_exterior_map({1.25, 0.0});
    CHECK(close(a.value, 2.0, 1e-15));
    CHECK(a.branch == Branch::plus);
    auto b = segment_exterior_map({-1.25, 0.0});
    CHECK(close(b.value, -2.0, 1e-15));
    CHECK(b.branch == Branch::minus);
    auto c = segment_exterior_map({0.0, 0.5});
    CHECK(close(c.value, {0.0, (1.0 + std::sqrt(5.0)) / 2.0}, 1e-15));
    CHECK(c.branch == Branch::plus);
    CHECK(segment_exterior_map({0.0, -0.5}).branch == Branch::minus);
    CHECK_THROWS_AS(segment_exterior_map({0.3, 0.0}), DomainError);
    CHECK_THROWS_AS(segment_exterior_map({1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(segment_exterior_map({0.3, 1e-13}), DomainError);
  }

  TEST_CASE("segment map inverts joukowski on random exterior points") {
    std::mt19937_64 rng(2);
    for (int k = 0; k < 10000; ++k) {
      const Vec2 x = random_exterior(rng);
      const Complex z = segment_exterior_map(x).value;
      REQUIRE(std::abs(z) > 1.0);
      CHECK(close(joukowski(z), to_complex(x), 1e-12 * (1.0 + norm(x))));
    }
  }

  TEST_CASE("continuity across the imaginary axis") {
    for (double y : {-3.0, -0.7, -1e-3, 1e-3, 0.4, 2.5}) {
      const Complex on = segment_exterior_map({0.0, y}).value;
      CHECK(close(segment_exterior_map({1e-14, y}).value, on, 1e-12));
      CHECK(close(segment_exterior_map({-1e-14, y}).value, on, 1e-12));
    }
  }

  TEST_CASE("side limits") {
    CHECK(close(side_limit_map(0.0, Side::up), {0.0, 1.0}, 1e-15));
    CHECK(close(side_limit_map(0.6, Side::up), {0.6, 0.8}, 1e-15));
    CHECK(close(side_limit_map(0.6, Side::down), {0.6, -0.8}, 1e-15));
    CHECK_THROWS_AS(side_limit_map(1.0, Side::up), DomainError);
    CHECK_THROWS_AS(side_limit_map(-1.0, Side::down), DomainError);
    // Off-slit values approach the side limits.
    CHECK(close(segment_exterior_map({0.6, 1e-9}).value, side_limit_map(0.6, Side::up), 1e-8));
    CHECK(close(segment_exterior_map({0.6, -1e-9}).value, side_limit_map(0.6, Side::down), 1e-8));
    CHECK(close(segment_map_complex_derivative({0.6, 1e-9}), side_limit_derivative(0.6, Side::up), 1e-7));
  }

  TEST_CASE("segment map derivative") {
    const double v = 1.0 + 2.0 / std::sqrt(3.0);
    CHECK(close(segment_map_complex_derivative({2.0, 0.0}), v, 1e-14));
    CHECK(close(segment_map_complex_derivative({-2.0, 0.0}), v, 1e-14));
    const Mat2 j = segment_map_derivative({0.3, 0.7});
    CHECK(std::abs(j.a11 - j.a22) < 1e-15);
    CHECK(std::abs(j.a12 + j.a21) < 1e-15);
    // Derivative matches a central difference of the map.
    const Vec2 x{0.4, 0.9};
    const double h = 1e-6;
    const Complex fd = (segment_exterior_map(x + Vec2{h, 0}).value - segment_exterior_map(x - Vec2{h, 0}).value) / (2 * h);
    CHECK(close(fd, segment_map_complex_derivative(x), 1e-8));
    // |T'| grows like the inverse square root of the endpoint distance.
    std::vector<std::pair<double, double>> ser;
    for (double d : {1e-6, 1e-7, 1e-8}) ser.push_back({d, std::abs(segment_map_complex_derivative({1.0 + d, 0.0}))});
    CHECK(std::abs(fit_exponent(ser).exponent + 0.5) < 0.01);
    CHECK_THROWS_AS(segment_map_complex_derivative({1.0, 0.0}), DomainError);
  }

  TEST_CASE("conformal structure and inverse") {
    const MapPtr maps[] = {segment_map(), disk_identity_map(), epsilon_map(segment_map(), 0.1)};
    std::mt19937_64 rng(3);
    for (const auto& m : maps) {
      for (int k = 0; k < 200; ++k) {
        const Vec2 x = random_exterior(rng);
        if (!m->in_domain(x) || std::abs(m->forward(x)) < 1.01) continue;
        const Mat2 j = m->jacobian(x);
        const Mat2 jt = j.transpose();
        const double d = m->jac_det(x);
        const double p11 = j.a11 * jt.a11 + j.a12 * jt.a21;
        const double p12 = j.a11 * jt.a12 + j.a12 * jt.a22;
        const double p22 = j.a21 * jt.a12 + j.a22 * jt.a22;
        CHECK(std::abs(p11 - d) < 1e-10 * (1 + d));
        CHECK(std::abs(p22 - d) < 1e-10 * (1 + d));
        CHECK(std::abs(p12) < 1e-10 * (1 + d));
        CHECK(norm(m->inverse(m->forward(x)) - x) < 1e-10 * (1 + norm(x)));
      }
    }
  }

  TEST_CASE("epsilon family") {
    const MapPtr base = segment_map();
    const MapPtr m = epsilon_map(base, 0.1);
    CHECK(close(m->forward({2.0, 0.0}), (2.0 + std::sqrt(3.0)) / 1.1, 1e-14));
    CHECK(m->domain_tag() == DomainTag::epsilon_obstacle);
    CHECK(m->epsilon() == 0.1);
    const Vec2 x{0.7, 1.3};
    CHECK(std::abs(m->jac_det(x) - base->jac_det(x) / 1.21) < 1e-14);
    // Boundary is the ellipse with semi-axes (r + 1/r)/2 and (r - 1/r)/2.
    const Vec2 a = m->inverse(1.0);
    const Vec2 b = m->inverse({0.0, 1.0});
    CHECK(a.x == doctest::Approx(0.5 * (1.1 + 1 / 1.1)).epsilon(1e-14));
    CHECK(b.y == doctest::Approx(0.5 * (1.1 - 1 / 1.1)).epsilon(1e-14));
    CHECK(a.x == doctest::Approx(1.00454545454545).epsilon(1e-12));
    CHECK(b.y == doctest::Approx(0.0954545454545).epsilon(1e-10));
    CHECK_FALSE(m->in_domain({0.5, 0.0}));
    CHECK_FALSE(m->in_domain({0.0, 0.05}));
    CHECK(m->in_domain({0.0, 0.1}));
    CHECK_THROWS_AS(epsilon_map(base, 0.0), DomainError);
    CHECK_THROWS_AS(epsilon_map(base, -0.1), DomainError);
  }

  TEST_CASE("epsilon sup-norm distance decays linearly") {
    const MapPtr base = segment_map();
    std::vector<std::pair<double, double>> ser;
    for (double eps : {0.2, 0.1, 0.05, 0.025}) {
      const MapPtr m = epsilon_map(base, eps);
      double sup = 0.0, sup_t = 0.0;
      for (int i = 0; i < 64; ++i)
        for (int k = 1; k <= 40; ++k) {
          const Vec2 x = (5.0 * k / 40.0) * Vec2{std::cos(0.1 * i), std::sin(0.1 * i)};
          if (!m->in_domain(x)) continue;
          sup = std::max(sup, std::abs(m->forward(x) - base->forward(x)));
          sup_t = std::max(sup_t, std::abs(base->forward(x)));
        }
      CHECK(sup <= eps / (1 + eps) * sup_t * (1 + 1e-12));
      ser.push_back({eps, sup});
    }
    CHECK(fit_exponent(ser).exponent == doctest::Approx(1.0).epsilon(0.1));
  }

  TEST_CASE("level-set area") {
    CHECK(segment_level_area(1.0) == 0.0);
    CHECK(segment_level_area(1.1) == doctest::Approx(std::numbers::pi * 0.5 * (1.1 + 1 / 1.1) * 0.5 * (1.1 - 1 / 1.1)));
  }

  TEST_CASE("disk identity map") {
    const MapPtr m = disk_identity_map();
    CHECK(close(m->forward({3.0, 4.0}), {3.0, 4.0}, 0.0));
    CHECK(m->jac_det({5.0, -2.0}) == 1.0);
    CHECK(std::abs(std::abs(m->forward({std::cos(0.3), std::sin(0.3)})) - 1.0) < 1e-15);
    CHECK(m->domain_tag() == DomainTag::unit_disk_exterior);
  }

  TEST_CASE("slit crossing detection") {
    const MapPtr m = segment_map();
    CHECK(m->crosses_slit({0.2, 0.5}, {0.3, -0.5}));
    CHECK_FALSE(m->crosses_slit({1.5, 0.5}, {1.5, -0.5}));
    CHECK_FALSE(m->crosses_slit({0.2, 0.5}, {0.3, 0.1}));
  }
}

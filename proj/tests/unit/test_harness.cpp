#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "thinflow/error.hpp"
#include "thinflow/fit.hpp"
#include "thinflow/harness/config.hpp"
#include "thinflow/harness/experiment.hpp"
#include "thinflow/harness/export.hpp"

using namespace thinflow;
namespace fs = std::filesystem;

namespace {

std::string config_error_path(const nlohmann::json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

RunConfig small_config(const fs::path& out) {
  RunConfig c = default_config();
  c.h = 0.1;
  c.delta = 0.2;
  c.sweep.eps = {0.2, 0.1, 0.05};
  c.sweep.T = 0.1;
  c.sweep.dt = 0.02;
  c.sweep.snapshots = {0.0, 0.1};
  c.quadrature.n_theta = 128;
  c.output = out.string();
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("config round trip and hash") {
    const RunConfig c = default_config();
    CHECK_NOTHROW(c.validate());
    const RunConfig d = parse_config(c.to_json());
    CHECK(d.to_json() == c.to_json());
    CHECK(config_hash(c) == config_hash(d));
    CHECK(config_hash(c).size() == 16);
    RunConfig e = c;
    e.sweep.dt = 0.002;
    CHECK(config_hash(e) != config_hash(c));
  }

  TEST_CASE("config errors name the field") {
    nlohmann::json j = default_config().to_json();
    j["sweep"]["bogus"] = 1;
    CHECK(config_error_path(j) == "sweep.bogus");
    j = default_config().to_json();
    j["h"] = "fine";
    CHECK(config_error_path(j) == "h");
    j = default_config().to_json();
    j["sweep"]["eps"] = nlohmann::json::array();
    CHECK(config_error_path(j) == "sweep.eps");
    j = default_config().to_json();
    j["sweep"]["eps"] = {0.1, 0.2};
    CHECK(config_error_path(j) == "sweep.eps[1]");
    j = default_config().to_json();
    j["map"] = {{"epsilon", {{"base", "segment"}, {"eps", -1.0}}}};
    CHECK(config_error_path(j) == "map.epsilon.eps");
    j = default_config().to_json();
    j["map"] = {{"epsilon", {{"base", "disk"}, {"eps", 0.1}}}};
    const RunConfig c = parse_config(j);
    CHECK(c.map.base == "disk");
    CHECK(c.map.build()->epsilon() == doctest::Approx(0.1));
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  }

  TEST_CASE("exponent fit") {
    const ExponentFit f = fit_exponent({{0.1, 0.3}, {0.05, 0.15}, {0.025, 0.075}});
    CHECK(f.exponent == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.stderr_ < 1e-12);
    CHECK(std::exp(f.log_prefactor) == doctest::Approx(3.0).epsilon(1e-12));
    const ExponentFit g = fit_exponent({{1e-3, std::pow(1e-3, -0.5)}, {1e-4, 100.0}, {1e-5, std::pow(1e-5, -0.5)}});
    CHECK(g.exponent == doctest::Approx(-0.5).epsilon(1e-12));
    const ExponentFit flat = fit_exponent({{0.1, 2.0}, {0.05, 2.0}, {0.025, 2.0}});
    CHECK(std::abs(flat.exponent) < 1e-12);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> noise(-1.0, 1.0);
    std::vector<std::pair<double, double>> noisy;
    for (int k = 0; k < 12; ++k) {
      const double s = std::pow(10.0, -1.0 - 0.35 * k);
      noisy.push_back({s, std::pow(s, -0.5) * (1.0 + 0.01 * noise(rng))});
    }
    CHECK(std::abs(fit_exponent(noisy).exponent + 0.5) < 0.02);
    CHECK_THROWS_AS(fit_exponent({{0.1, 1.0}, {0.05, 0.5}}), DomainError);
    CHECK_THROWS_AS(fit_exponent({{0.1, 1.0}, {0.05, 0.0}, {0.025, 0.2}}), DomainError);
  }

  TEST_CASE("format and tables") {
    CHECK(std::stod(format_double(0.1)) == 0.1);
    CHECK(format_double(1.0) == "1");
    Table t;
    t.columns = {"a", "b"};
    t.add({"1", "2"});
    CHECK_THROWS_AS(t.add({"1"}), Error);
    CHECK(t.to_csv("abc") == "a,b,config_hash\n1,2,abc\n");
  }

  TEST_CASE("grid parsing") {
    const GridSpec g = parse_grid("3,4");
    CHECK(g.nx == 3);
    CHECK(g.ny == 4);
    const GridSpec b = parse_grid("2,2,-1,1,0.5,2");
    CHECK(b.xmin == -1.0);
    CHECK(b.ymax == 2.0);
    CHECK_THROWS_AS(parse_grid("2"), ConfigError);
    CHECK_THROWS_AS(parse_grid("0,2"), ConfigError);
    CHECK_THROWS_AS(parse_grid("2,x"), ConfigError);
    CHECK_THROWS_AS(parse_grid("2,2,1,-1,0,1"), ConfigError);
  }

  TEST_CASE("field export") {
    VorticitySample s;
    s.blob_radius = 0.1;
    const VelocityEvaluator ev(segment_map(), s, 1.0);
    const Table t = export_field(ev, parse_grid("2,2"));
    REQUIRE(t.rows.size() == 4);
    for (const auto& r : t.rows) CHECK(r[6] == "0");
    // Pure circulation: u1 is odd and u2 even under y -> -y.
    const Table m = export_field(ev, parse_grid("3,4,-2,2,-1.5,1.5"));
    REQUIRE(m.rows.size() == 12);
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t i = 0; i < 3; ++i) {
        const auto& lo = m.rows[j * 3 + i];
        const auto& hi = m.rows[(3 - j) * 3 + i];
        CHECK(std::stod(lo[2]) == doctest::Approx(-std::stod(hi[2])).epsilon(1e-12));
        CHECK(std::stod(lo[3]) == doctest::Approx(std::stod(hi[3])).epsilon(1e-12));
      }
    // The far field is dominated by the harmonic part, |u| ~ alpha/(2 pi |x|).
    GridSpec far = parse_grid("2,2,-40,40,-40,40");
    const Table corners = export_field(ev, far);
    for (const auto& r : corners.rows) {
      const double dist = std::hypot(std::stod(r[0]), std::stod(r[1]));
      CHECK(std::stod(r[4]) * dist <= 1.05 / (2 * 3.141592653589793));
    }
    // Points on the slit are skipped rather than evaluated.
    const Table slit = export_field(ev, parse_grid("3,1,-0.5,0.5,0,0"));
    for (const auto& r : slit.rows) CHECK(r[6] == "1");
  }

  TEST_CASE("experiment writes deterministic tables") {
    const fs::path dir = fs::temp_directory_path() / "thinflow_harness_test";
    fs::remove_all(dir);
    const RunConfig c = small_config(dir);
    const ResultBundle a = run_experiment(c);
    for (const char* f : {"conservation.csv", "convergence.csv", "family.csv", "jump.csv", "fits.json", "metadata.json"})
      CHECK(fs::exists(dir / f));
    CHECK(a.metrics.size() == 3);
    CHECK(a.config_hash == config_hash(c));
    const std::string first = slurp(dir / "convergence.csv");
    CHECK(first.find(a.config_hash) != std::string::npos);
    run_experiment(c);
    CHECK(slurp(dir / "convergence.csv") == first);
    for (const auto& m : a.metrics) {
      CHECK(m.l2_error.size() == 2);
      CHECK(m.flux > 0.0);
    }
    fs::remove_all(dir);
  }
}

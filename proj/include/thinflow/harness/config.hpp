#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "thinflow/limits.hpp"
#include "thinflow/transport.hpp"

namespace thinflow {

struct MapSpec {
  std::string base = "segment";  // "segment" or "disk"
  double eps = 0.0;              // > 0 selects the epsilon family member

  MapPtr build() const;
  MapPtr build_base() const;
};

struct ArcSpec {
  std::string kind = "segment";  // "segment" or "sampled"
  std::vector<Vec2> points;
};

struct SweepSpec {
  std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
  double R = 3.0;
  double T = 1.0;
  double dt = 0.001;
  std::vector<double> snapshots{0.0, 0.5};
};

struct RunConfig {
  MapSpec map;
  ArcSpec arc;
  InitialVorticity vorticity;
  double gamma = 1.0;
  double h = 0.05;
  double delta = 0.1;
  SweepSpec sweep;
  QuadratureSpec quadrature;
  std::string output = "out";
  std::uint64_t seed = 20240611;

  // Throws ConfigError with the offending field path.
  void validate() const;
  nlohmann::json to_json() const;
};

RunConfig default_config();
// Strict parse: unknown keys and type mismatches are ConfigErrors naming the field path.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// FNV-1a 64-bit hash of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace thinflow

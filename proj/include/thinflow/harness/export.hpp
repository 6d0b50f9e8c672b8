#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "thinflow/limits.hpp"

namespace thinflow {

// Shortest round-trip text form of a double (%.17g).
std::string format_double(double v);

// CSV table; every row is stamped with the producing config hash on write.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  std::string to_csv(const std::string& config_hash) const;
  void write(const std::filesystem::path& file, const std::string& config_hash) const;
};

struct GridSpec {
  std::size_t nx = 2;
  std::size_t ny = 2;
  double xmin = -3.0, xmax = 3.0;
  double ymin = -3.0, ymax = 3.0;
  double clearance = 1e-6;  // points closer than this to the slit are skipped and flagged
};

// Parses "nx,ny" or "nx,ny,xmin,xmax,ymin,ymax".
GridSpec parse_grid(const std::string& text);

// Columns x, y, u1, u2, speed, cutoff, skipped. cutoff is 1 when no cutoff field is given.
Table export_field(const VelocityEvaluator& ev, const GridSpec& grid, const CutoffField* cutoff = nullptr);

}  // namespace thinflow

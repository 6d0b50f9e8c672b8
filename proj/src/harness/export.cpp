#include "thinflow/harness/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "thinflow/error.hpp"

namespace thinflow {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void Table::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw Error("table: row width does not match the header");
  rows.push_back(std::move(row));
}

std::string Table::to_csv(const std::string& config_hash) const {
  std::ostringstream out;
  for (const auto& c : columns) out << c << ',';
  out << "config_hash\n";
  for (const auto& r : rows) {
    for (const auto& cell : r) out << cell << ',';
    out << config_hash << '\n';
  }
  return out.str();
}

void Table::write(const std::filesystem::path& file, const std::string& config_hash) const {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  out << to_csv(config_hash);
}

GridSpec parse_grid(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--grid", "cannot parse '" + item + "'");
    }
  }
  if (v.size() != 2 && v.size() != 6) throw ConfigError("--grid", "expected nx,ny or nx,ny,xmin,xmax,ymin,ymax");
  GridSpec g;
  if (v[0] < 1 || v[1] < 1 || v[0] != std::floor(v[0]) || v[1] != std::floor(v[1]))
    throw ConfigError("--grid", "nx and ny must be positive integers");
  g.nx = static_cast<std::size_t>(v[0]);
  g.ny = static_cast<std::size_t>(v[1]);
  if (v.size() == 6) {
    g.xmin = v[2];
    g.xmax = v[3];
    g.ymin = v[4];
    g.ymax = v[5];
    if (!(g.xmax >= g.xmin) || !(g.ymax >= g.ymin)) throw ConfigError("--grid", "empty box");
  }
  return g;
}

Table export_field(const VelocityEvaluator& ev, const GridSpec& grid, const CutoffField* cutoff) {
  Table t;
  t.columns = {"x", "y", "u1", "u2", "speed", "cutoff", "skipped"};
  const ConformalMap& m = ev.map();
  auto coord = [](double lo, double hi, std::size_t n, std::size_t i) {
    return n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  for (std::size_t j = 0; j < grid.ny; ++j)
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const Vec2 x{coord(grid.xmin, grid.xmax, grid.nx, i), coord(grid.ymin, grid.ymax, grid.ny, j)};
      bool skip = false;
      if (m.has_slit()) {
        const double cx = std::clamp(x.x, -1.0, 1.0);
        skip = std::hypot(x.x - cx, x.y) < grid.clearance;
      }
      skip = skip || !m.in_domain(x);
      if (skip) {
        t.add({format_double(x.x), format_double(x.y), "nan", "nan", "nan", format_double(0.0), "1"});
        continue;
      }
      const Vec2 u = ev.total_velocity(x);
      const double c = cutoff ? cutoff->value(x) : 1.0;
      t.add({format_double(x.x), format_double(x.y), format_double(u.x), format_double(u.y), format_double(norm(u)),
             format_double(c), "0"});
    }
  return t;
}

}  // namespace thinflow

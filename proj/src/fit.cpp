#include "thinflow/fit.hpp"

#include <cmath>

#include "thinflow/error.hpp"

namespace thinflow {

ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 3) throw DomainError("fit_exponent: need at least 3 points");
  const auto n = static_cast<double>(series.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [s, v] : series) {
    if (!(s > 0.0) || !(v > 0.0) || !std::isfinite(s) || !std::isfinite(v))
      throw DomainError("fit_exponent: scales and values must be positive");
    sx += std::log(s);
    sy += std::log(v);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [s, v] : series) {
    const double dx = std::log(s) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(v) - my);
  }
  if (sxx == 0.0) throw DomainError("fit_exponent: scales must not all coincide");
  const double slope = sxy / sxx;
  const double icept = my - slope * mx;
  double ss = 0.0;
  for (const auto& [s, v] : series) {
    const double r = std::log(v) - icept - slope * std::log(s);
    ss += r * r;
  }
  const double se = std::sqrt(ss / (n - 2.0) / sxx);
  return {slope, se, icept};
}

}  // namespace thinflow

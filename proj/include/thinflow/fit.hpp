#pragma once

#include <utility>
#include <vector>

namespace thinflow {

struct ExponentFit {
  double exponent;
  double stderr_;
  double log_prefactor;
};

// Least-squares slope of log(value) against log(scale). Needs >= 3 points with positive data.
ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& series);

}  // namespace thinflow

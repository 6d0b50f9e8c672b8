#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "thinflow/vec2.hpp"

namespace thinflow {

struct Node {
  double x;
  double w;
};

// Composite Gauss-Legendre nodes over [breaks[0], breaks.back()] with panels no wider
// than max_width inside each break interval.
std::vector<Node> composite_gauss(const std::vector<double>& breaks, double max_width, int order = 16);

// Periodic trapezoid nodes on [0, 2pi).
std::vector<Node> periodic_nodes(std::size_t n);

// Composite midpoint nodes on [a,b].
std::vector<Node> midpoint_nodes(double a, double b, std::size_t n);

}  // namespace thinflow

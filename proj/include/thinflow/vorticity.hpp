#pragma once

#include <cstddef>
#include <vector>

#include "thinflow/vec2.hpp"

namespace thinflow {

// Particle discretization of a vorticity field. Strengths are fixed at creation.
struct VorticitySample {
  std::vector<Vec2> positions;
  std::vector<double> strengths;
  double blob_radius = 0.0;
  double cell_area = 0.0;

  std::size_t size() const { return positions.size(); }
  double total_strength() const;
  // Largest |x| over particles with nonzero strength (0 if none).
  double support_radius() const;
  // Throws DomainError on mismatched sizes, non-finite data or a nonpositive blob radius.
  void validate() const;
};

}  // namespace thinflow

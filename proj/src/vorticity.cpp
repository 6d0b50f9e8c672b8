#include "thinflow/vorticity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "thinflow/error.hpp"

namespace thinflow {

double VorticitySample::total_strength() const {
  double s = 0.0;
  for (double g : strengths) s += g;
  return s;
}

double VorticitySample::support_radius() const {
  double r = 0.0;
  for (std::size_t i = 0; i < positions.size(); ++i)
    if (strengths[i] != 0.0) r = std::max(r, norm(positions[i]));
  return r;
}

void VorticitySample::validate() const {
  if (positions.size() != strengths.size()) throw DomainError("sample: positions/strengths size mismatch");
  if (!(blob_radius > 0.0) || !std::isfinite(blob_radius)) throw DomainError("sample: blob radius must be positive");
  if (!(cell_area >= 0.0)) throw DomainError("sample: negative cell area");
  for (std::size_t i = 0; i < positions.size(); ++i)
    if (!is_finite(positions[i]) || !std::isfinite(strengths[i]))
      throw DomainError("sample: non-finite data at particle " + std::to_string(i));
}

}  // namespace thinflow

#include "thinflow/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "thinflow/error.hpp"

namespace thinflow {

namespace {

template <int N>
void append_panel(std::vector<Node>& out, double a, double b) {
  using rule = boost::math::quadrature::gauss<double, N>;
  const auto& x = rule::abscissa();
  const auto& w = rule::weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      out.push_back({c, h * w[i]});
      continue;
    }
    out.push_back({c - h * x[i], h * w[i]});
    out.push_back({c + h * x[i], h * w[i]});
  }
}

}  // namespace

std::vector<Node> composite_gauss(const std::vector<double>& breaks, double max_width, int order) {
  if (breaks.size() < 2) throw DomainError("composite_gauss: need at least two breakpoints");
  if (!(max_width > 0.0)) throw DomainError("composite_gauss: max_width must be positive");
  std::vector<Node> out;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k];
    const double b = breaks[k + 1];
    if (!(b >= a)) throw DomainError("composite_gauss: breakpoints must be nondecreasing");
    if (b == a) continue;
    const auto panels = static_cast<std::size_t>(std::ceil((b - a) / max_width));
    for (std::size_t p = 0; p < panels; ++p) {
      const double pa = a + (b - a) * static_cast<double>(p) / static_cast<double>(panels);
      const double pb = a + (b - a) * static_cast<double>(p + 1) / static_cast<double>(panels);
      switch (order) {
        case 8: append_panel<8>(out, pa, pb); break;
        case 16: append_panel<16>(out, pa, pb); break;
        case 30: append_panel<30>(out, pa, pb); break;
        default: throw DomainError("composite_gauss: supported orders are 8, 16, 30");
      }
    }
  }
  return out;
}

std::vector<Node> periodic_nodes(std::size_t n) {
  if (n == 0) throw DomainError("periodic_nodes: n must be positive");
  std::vector<Node> out(n);
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {h * static_cast<double>(i), h};
  return out;
}

std::vector<Node> midpoint_nodes(double a, double b, std::size_t n) {
  if (n == 0 || !(b > a)) throw DomainError("midpoint_nodes: bad interval");
  std::vector<Node> out(n);
  const double h = (b - a) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {a + h * (static_cast<double>(i) + 0.5), h};
  return out;
}

}  // namespace thinflow

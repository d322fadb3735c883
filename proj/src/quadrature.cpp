#include "advloss/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <stdexcept>

namespace advloss::quad {

Rule1D composite_gauss(int min_nodes) {
  if (min_nodes < 1) throw std::invalid_argument("quadrature needs >= 1 node");
  using G = boost::math::quadrature::gauss<double, 15>;
  const auto& absc = G::abscissa();  // non-negative half of the symmetric rule
  const auto& w = G::weights();

  const int panels = (min_nodes + 14) / 15;
  const double h = 1.0 / panels;

  Rule1D rule;
  rule.nodes.reserve(static_cast<std::size_t>(panels) * 15);
  rule.weights.reserve(static_cast<std::size_t>(panels) * 15);
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    const double half = 0.5 * h;
    // abscissa()[0] is 0 for the odd-point rule; emit it once per panel.
    rule.nodes.push_back(mid);
    rule.weights.push_back(w[0] * half);
    for (std::size_t i = 1; i < absc.size(); ++i) {
      rule.nodes.push_back(mid - absc[i] * half);
      rule.weights.push_back(w[i] * half);
      rule.nodes.push_back(mid + absc[i] * half);
      rule.weights.push_back(w[i] * half);
    }
  }
  return rule;
}

double tensor_integral(int d, int min_nodes_per_axis,
                       const std::function<double(std::span<const double>)>& f) {
  if (d < 1 || d > 3)
    throw std::invalid_argument("tensor_integral supports d in {1,2,3}");
  const Rule1D rule = composite_gauss(min_nodes_per_axis);
  const std::size_t m = rule.nodes.size();
  double total = 0.0;
  double x[3];
  if (d == 1) {
    for (std::size_t i = 0; i < m; ++i) {
      x[0] = rule.nodes[i];
      total += rule.weights[i] * f(std::span<const double>(x, 1));
    }
  } else if (d == 2) {
    for (std::size_t i = 0; i < m; ++i) {
      x[0] = rule.nodes[i];
      double row = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        x[1] = rule.nodes[j];
        row += rule.weights[j] * f(std::span<const double>(x, 2));
      }
      total += rule.weights[i] * row;
    }
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      x[0] = rule.nodes[i];
      double plane = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        x[1] = rule.nodes[j];
        double row = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          x[2] = rule.nodes[k];
          row += rule.weights[k] * f(std::span<const double>(x, 3));
        }
        plane += rule.weights[j] * row;
      }
      total += rule.weights[i] * plane;
    }
  }
  return total;
}

}  // namespace advloss::quad

#pragma once

// Composite Gauss-Legendre quadrature on [0,1] and its tensor products.
// Panels use the 15-point rule (nodes/weights from boost.math), so the
// requested resolution is rounded up to a multiple of 15.

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace advloss::quad {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Composite rule with at least `min_nodes` points on [0,1].
Rule1D composite_gauss(int min_nodes);

// Integral of f over [0,1]^d with the given per-axis resolution (d <= 3).
double tensor_integral(int d, int min_nodes_per_axis,
                       const std::function<double(std::span<const double>)>& f);

}  // namespace advloss::quad

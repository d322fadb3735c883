#include "advloss/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace advloss::estimator {

namespace {

// In-place pairwise (cascade) summation; deterministic for a fixed input
// order and compatible with combining partition sums.
double pairwise_sum(std::span<double> v) {
  if (v.empty()) return 0.0;
  std::size_t n = v.size();
  while (n > 1) {
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) v[i] = v[2 * i] + v[2 * i + 1];
    if (n % 2 == 1) {
      v[half] = v[n - 1];
      n = half + 1;
    } else {
      n = half;
    }
  }
  return v[0];
}

void check_dataset(const Dataset& data) {
  if (data.empty())
    throw std::invalid_argument("estimator requires a non-empty dataset");
}

}  // namespace

double empirical_coefficient(const Dataset& data, const BasisIndex& z) {
  check_dataset(data);
  if (!z.is_constant() && z.dim() != data.dim)
    throw std::invalid_argument("index dimension does not match the data");
  std::vector<double> vals(data.size());
  for (std::size_t i = 0; i < data.size(); ++i)
    vals[i] = basis::eval_basis(z, data.point(i));
  return pairwise_sum(vals) / static_cast<double>(data.size());
}

density::SeriesDensity series_estimate(const Dataset& data,
                                       std::span<const BasisIndex> indices) {
  check_dataset(data);
  basis::CoefficientVector coeffs;
  std::vector<double> vals(data.size());
  BasisKind kind = BasisKind::Fourier;
  for (const auto& z : indices) {
    if (z.is_constant()) continue;  // implicit unit coefficient
    if (z.tag() == BasisIndex::Tag::Haar) kind = BasisKind::Haar;
    for (std::size_t i = 0; i < data.size(); ++i)
      vals[i] = basis::eval_basis(z, data.point(i));
    coeffs[z] = pairwise_sum(vals) / static_cast<double>(data.size());
  }
  return density::SeriesDensity(data.dim, kind, std::move(coeffs));
}

density::SeriesDensity series_estimate(const Dataset& data,
                                       const TruncationSet& Z) {
  auto est = series_estimate(data, std::span<const BasisIndex>(Z.indices));
  if (Z.kind == BasisKind::Haar && est.coefficients().empty())
    return density::SeriesDensity(data.dim, BasisKind::Haar, {});
  return est;
}

namespace {

// Per-mode CV contribution. With Q_z = (1/n) sum_i phi_z(X_i)^2,
//   e_z = P_hat_z^2 - 2 (n P_hat_z^2 - Q_z) / (n - 1),
// and J(zeta) = -1 + sum over the zero-mean truncation of e_z.
double mode_score(const Dataset& data, const BasisIndex& z,
                  std::vector<double>& buf) {
  const auto n = static_cast<double>(data.size());
  buf.resize(data.size());
  for (std::size_t i = 0; i < data.size(); ++i)
    buf[i] = basis::eval_basis(z, data.point(i));
  std::vector<double> sq(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) sq[i] = buf[i] * buf[i];
  const double phat = pairwise_sum(buf) / n;
  const double q = pairwise_sum(sq) / n;
  return phat * phat - 2.0 * (n * phat * phat - q) / (n - 1.0);
}

}  // namespace

std::vector<double> cv_profile(const Dataset& data, BasisKind kind,
                               std::span<const int> grid) {
  check_dataset(data);
  if (data.size() < 2)
    throw std::invalid_argument("cross-validation requires n >= 2");
  if (grid.empty()) throw std::invalid_argument("zeta grid is empty");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (grid[i] >= grid[i + 1])
      throw std::invalid_argument("zeta grid must be strictly increasing");
  if (grid.front() < 0)
    throw std::invalid_argument("zeta grid values must be non-negative");

  const int zmax = grid.back();
  const auto Z =
      basis::enumerate_truncation(kind, zmax, data.dim, /*zero_mean=*/true);

  // Group per-mode scores by shell so nested truncations are prefix sums.
  std::vector<double> shell(static_cast<std::size_t>(zmax) + 1, 0.0);
  std::vector<double> buf;
  for (const auto& z : Z.indices) {
    const int s = kind == BasisKind::Fourier ? z.max_abs_freq() : z.level();
    shell[static_cast<std::size_t>(s)] += mode_score(data, z, buf);
  }

  std::vector<double> out;
  out.reserve(grid.size());
  double acc = -1.0;
  int next = kind == BasisKind::Fourier ? 1 : 0;  // Fourier shell 0 is empty
  for (int zeta : grid) {
    for (; next <= zeta; ++next) acc += shell[static_cast<std::size_t>(next)];
    out.push_back(acc);
  }
  return out;
}

double cv_score(const Dataset& data, BasisKind kind, int zeta) {
  const int grid[1] = {zeta};
  return cv_profile(data, kind, grid)[0];
}

int zeta_grid_ceiling(std::size_t n, int d) {
  return static_cast<int>(
      std::ceil(std::pow(static_cast<double>(n), 1.0 / d) - 1e-9));
}

int adaptive_zeta(const Dataset& data, BasisKind kind,
                  std::span<const int> grid) {
  if (grid.empty()) throw std::invalid_argument("zeta grid is empty");
  const int ceiling = zeta_grid_ceiling(data.size(), data.dim);
  if (grid.back() > ceiling)
    throw std::invalid_argument("zeta grid exceeds ceil(n^{1/d}) = " +
                                std::to_string(ceiling));
  const auto scores = cv_profile(data, kind, grid);
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] < scores[best]) best = i;  // strict: ties keep smaller zeta
  return grid[best];
}

}  // namespace advloss::estimator

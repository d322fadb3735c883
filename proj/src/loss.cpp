#include "advloss/loss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace advloss::loss {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_exponent(double p) {
  if (!(p >= 1.0))
    throw std::invalid_argument("ellipse exponent must satisfy p >= 1");
}

double checked_weight(const WeightRule& a, const BasisIndex& z) {
  const double w = a(z);
  if (!(w > 0.0))
    throw std::invalid_argument("weight must be positive at " +
                                basis::to_string(z));
  return w;
}
}  // namespace

double hoelder_conjugate(double p) {
  check_exponent(p);
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

double adversarial_loss(const CoefficientVector& delta, const EllipseClass& D) {
  check_exponent(D.exponent);
  const double pp = hoelder_conjugate(D.exponent);
  if (std::isinf(pp)) {
    double best = 0.0;
    for (const auto& [z, dz] : delta)
      best = std::max(best, std::abs(dz) / checked_weight(D.weights, z));
    return D.radius * best;
  }
  if (pp == 1.0) {
    double sum = 0.0;
    for (const auto& [z, dz] : delta)
      sum += std::abs(dz) / checked_weight(D.weights, z);
    return D.radius * sum;
  }
  double sum = 0.0;
  for (const auto& [z, dz] : delta)
    sum += std::pow(std::abs(dz) / checked_weight(D.weights, z), pp);
  return D.radius * std::pow(sum, 1.0 / pp);
}

CoefficientVector optimal_discriminator(const CoefficientVector& delta,
                                        const EllipseClass& D) {
  check_exponent(D.exponent);
  if (D.exponent == 1.0 || std::isinf(D.exponent))
    throw std::invalid_argument(
        "optimal_discriminator requires p in (1, inf); vertex maximizers for "
        "p in {1, inf} are not provided");
  const double pp = hoelder_conjugate(D.exponent);

  // ||D/a||_{p'}
  double norm_pp = 0.0;
  bool any_nonzero = false;
  for (const auto& [z, dz] : delta) {
    if (dz != 0.0) any_nonzero = true;
    norm_pp += std::pow(std::abs(dz) / checked_weight(D.weights, z), pp);
  }
  norm_pp = std::pow(norm_pp, 1.0 / pp);
  if (!any_nonzero || norm_pp == 0.0)
    throw std::invalid_argument(
        "optimal_discriminator requires a nonzero coefficient difference");

  const double scale = D.radius / std::pow(norm_pp, pp - 1.0);
  CoefficientVector f;
  for (const auto& [z, dz] : delta) {
    if (dz == 0.0) continue;
    const double a = D.weights(z);
    const double mag = std::pow(std::abs(dz) / a, pp - 1.0);
    f[z] = scale * (dz > 0 ? 1.0 : -1.0) * mag / a;
  }
  return f;
}

MembershipResult ellipse_membership(const CoefficientVector& c,
                                    const EllipseClass& E) {
  check_exponent(E.exponent);
  double norm;
  if (std::isinf(E.exponent)) {
    norm = 0.0;
    for (const auto& [z, cz] : c)
      norm = std::max(norm, checked_weight(E.weights, z) * std::abs(cz));
  } else if (E.exponent == 1.0) {
    norm = 0.0;
    for (const auto& [z, cz] : c)
      norm += checked_weight(E.weights, z) * std::abs(cz);
  } else {
    double sum = 0.0;
    for (const auto& [z, cz] : c)
      sum += std::pow(checked_weight(E.weights, z) * std::abs(cz), E.exponent);
    norm = std::pow(sum, 1.0 / E.exponent);
  }
  return {norm, norm <= E.radius};
}

KernelSpectrum::KernelSpectrum(std::map<BasisIndex, double> table)
    : table_(std::move(table)) {
  if (table_.empty())
    throw std::invalid_argument("kernel spectrum table is empty");
  for (const auto& [z, v] : table_)
    if (!(v > 0.0))
      throw std::invalid_argument("kernel spectrum must be positive at " +
                                  basis::to_string(z));
}

KernelSpectrum KernelSpectrum::geometric(double ratio, int zmax, int d) {
  if (!(ratio > 0.0))
    throw std::invalid_argument("spectrum ratio must be positive");
  std::map<BasisIndex, double> table;
  const auto set = basis::enumerate_truncation(basis::BasisKind::Fourier, zmax,
                                               d, /*zero_mean=*/false);
  for (const auto& z : set.indices)
    table[z] = std::pow(ratio, z.max_abs_freq());
  return KernelSpectrum(std::move(table));
}

WeightRule KernelSpectrum::induced_weights() const {
  std::map<BasisIndex, double> inv;
  for (const auto& [z, v] : table_) inv[z] = 1.0 / v;
  return WeightRule::custom(std::move(inv));
}

EllipseClass KernelSpectrum::mmd_class(double radius) const {
  return EllipseClass{2.0, radius, induced_weights()};
}

double KernelSpectrum::squared_mass() const {
  double s = 0.0;
  for (const auto& [z, v] : table_) s += v * v;
  return s;
}

double KernelSpectrum::kernel(std::span<const double> x,
                              std::span<const double> y) const {
  double k = 0.0;
  for (const auto& [z, v] : table_)
    k += v * v * basis::eval_basis(z, x) * basis::eval_basis(z, y);
  return k;
}

double mmd_spectral(const CoefficientVector& delta, const KernelSpectrum& k,
                    double radius) {
  return adversarial_loss(delta, k.mmd_class(radius));
}

double mmd_vstat(const Dataset& X, const Dataset& Y, const KernelSpectrum& k) {
  if (X.empty() || Y.empty())
    throw std::invalid_argument("mmd_vstat requires non-empty samples");
  double sq = 0.0;
  for (const auto& [z, v] : k.table()) {
    double mx = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i)
      mx += basis::eval_basis(z, X.point(i));
    mx /= static_cast<double>(X.size());
    double my = 0.0;
    for (std::size_t i = 0; i < Y.size(); ++i)
      my += basis::eval_basis(z, Y.point(i));
    my /= static_cast<double>(Y.size());
    const double diff = v * (mx - my);
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

}  // namespace advloss::loss

#include "advloss/density.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "advloss/errors.hpp"
#include "advloss/quadrature.hpp"
#include "advloss/rng.hpp"

namespace advloss::density {

SeriesDensity::SeriesDensity(int dim, BasisKind kind, CoefficientVector coeffs)
    : dim_(dim), kind_(kind), coeffs_(std::move(coeffs)) {
  if (dim_ < 1) throw std::invalid_argument("density dimension must be >= 1");
  if (kind_ == BasisKind::Haar && dim_ != 1)
    throw std::invalid_argument("haar densities require d = 1");
  for (const auto& [z, c] : coeffs_) {
    if (z.is_constant())
      throw std::invalid_argument(
          "coefficient supplied on the constant index; its mass is fixed at 1");
    if (kind_ == BasisKind::Fourier) {
      if (z.tag() != BasisIndex::Tag::Fourier || z.dim() != dim_)
        throw std::invalid_argument("coefficient index " + basis::to_string(z) +
                                    " does not match a Fourier density in d=" +
                                    std::to_string(dim_));
    } else if (z.tag() != BasisIndex::Tag::Haar) {
      throw std::invalid_argument("coefficient index " + basis::to_string(z) +
                                  " does not match a Haar density");
    }
    (void)c;
  }
}

SeriesDensity SeriesDensity::uniform(int dim, BasisKind kind) {
  SeriesDensity p(dim, kind, {});
  p.validated_ = true;  // p_0 is trivially non-negative
  return p;
}

double SeriesDensity::coefficient(const BasisIndex& z) const {
  if (z.is_constant()) return 1.0;
  auto it = coeffs_.find(z);
  return it == coeffs_.end() ? 0.0 : it->second;
}

double SeriesDensity::operator()(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(dim_))
    throw std::invalid_argument("density evaluated at a point of dimension " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(dim_));
  double v = 1.0;
  for (const auto& [z, c] : coeffs_) v += c * basis::eval_basis(z, x);
  return v;
}

double SeriesDensity::coefficient_mass() const {
  double s = 0.0;
  for (const auto& [z, c] : coeffs_) s += std::abs(c) * basis::sup_norm(z);
  return s;
}

double SeriesDensity::envelope() const { return 1.0 + coefficient_mass(); }

std::string to_string(NonnegVerdict v) {
  switch (v) {
    case NonnegVerdict::Analytic:
      return "analytic";
    case NonnegVerdict::Certified:
      return "certified";
    case NonnegVerdict::NotNonnegative:
      return "not nonnegative";
    case NonnegVerdict::Unknown:
      return "unknown";
  }
  return "?";
}

namespace {

// Max level appearing in a Haar density's support; -1 when empty.
int max_haar_level(const CoefficientVector& coeffs) {
  int lvl = -1;
  for (const auto& [z, c] : coeffs) lvl = std::max(lvl, z.level());
  return lvl;
}

double grid_minimum(const SeriesDensity& p, int m) {
  const int d = p.dim();
  std::vector<double> x(static_cast<std::size_t>(d), 0.0);
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  double best = std::numeric_limits<double>::infinity();
  // midpoint grid: x_k = (k + 0.5)/m per axis
  while (true) {
    for (int j = 0; j < d; ++j) x[j] = (idx[j] + 0.5) / m;
    best = std::min(best, p(std::span<const double>(x.data(), x.size())));
    int axis = 0;
    while (axis < d && ++idx[axis] == m) idx[axis++] = 0;
    if (axis == d) break;
  }
  return best;
}

}  // namespace

NonnegCertificate nonneg_check(const SeriesDensity& p, int grid_per_axis) {
  if (grid_per_axis < 2)
    throw std::invalid_argument("nonneg_check requires grid resolution >= 2");

  const double mass = p.coefficient_mass();
  if (mass <= 1.0)
    return {1.0 - mass, 0.0, NonnegVerdict::Analytic};

  const double gmin = grid_minimum(p, grid_per_axis);
  if (gmin < 0.0) return {gmin, 0.0, NonnegVerdict::NotNonnegative};

  double slack;
  if (p.kind() == BasisKind::Haar) {
    const int depth = std::bit_width(static_cast<unsigned>(grid_per_axis)) - 1;
    const bool dyadic = std::has_single_bit(static_cast<unsigned>(grid_per_axis));
    // p is piecewise constant on dyadic cells of length 2^-(max level + 1);
    // a finer dyadic midpoint grid meets every piece, so the grid min is
    // the true min.
    if (dyadic && depth > max_haar_level(p.coefficients()))
      slack = 0.0;
    else
      slack = std::numeric_limits<double>::infinity();
  } else {
    double lip = 0.0;
    for (const auto& [z, c] : p.coefficients())
      lip += std::abs(c) * basis::sup_norm(z) * 2.0 * std::numbers::pi *
             z.max_abs_freq();
    slack = lip * std::sqrt(static_cast<double>(p.dim())) /
            (2.0 * grid_per_axis);
  }

  if (gmin - slack >= 0.0) return {gmin, slack, NonnegVerdict::Certified};
  return {gmin, slack, NonnegVerdict::Unknown};
}

SeriesDensity certify_nonnegative(const SeriesDensity& p, int grid_per_axis) {
  const auto cert = nonneg_check(p, grid_per_axis);
  if (!cert.nonnegative())
    throw condition_error("density non-negativity certificate (" +
                              to_string(cert.verdict) + ")",
                          cert.grid_min - cert.slack, 0.0);
  SeriesDensity q = p;
  q.validated_ = true;
  return q;
}

namespace {

int hamming(const std::vector<int>& a, const std::vector<int>& b) {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) ++d;
  return d;
}

}  // namespace

std::vector<std::vector<int>> varshamov_gilbert(int m, std::uint64_t seed) {
  if (m < 8)
    throw std::invalid_argument(
        "varshamov_gilbert requires m >= 8 (the bound is vacuous below)");
  const double min_dist = m / 8.0;
  const auto target =
      static_cast<std::size_t>(std::ceil(std::exp2(m / 8.0) - 1e-9));

  for (std::uint64_t round = 0; round < 64; ++round) {
    rng::Rng gen(rng::mix64(seed + round));
    std::vector<std::vector<int>> packed;
    packed.reserve(target);
    std::size_t attempts = 0;
    const std::size_t max_attempts = 4096 * target;
    while (packed.size() < target && attempts < max_attempts) {
      ++attempts;
      std::vector<int> cand(static_cast<std::size_t>(m));
      for (auto& s : cand) s = gen.coin() ? 1 : -1;
      bool ok = true;
      for (const auto& prev : packed)
        if (hamming(cand, prev) < min_dist) {
          ok = false;
          break;
        }
      if (ok) packed.push_back(std::move(cand));
    }
    if (packed.size() < target) continue;  // reseed and retry

    // verify the contract exhaustively before handing the set out
    bool verified = packed.size() >= target;
    for (std::size_t i = 0; verified && i < packed.size(); ++i)
      for (std::size_t j = i + 1; j < packed.size(); ++j)
        if (hamming(packed[i], packed[j]) < min_dist) {
          verified = false;
          break;
        }
    if (verified) return packed;
  }
  throw std::runtime_error("varshamov_gilbert: packing search failed");
}

PackingFamily packing_densities(const TruncationSet& Z,
                                const loss::EllipseClass& G,
                                SetSizeConvention convention,
                                std::uint64_t seed) {
  for (const auto& z : Z.indices)
    if (z.is_constant())
      throw std::invalid_argument(
          "packing_densities requires a zero-mean index set");
  const int m = static_cast<int>(Z.size());

  double sup_b = 0.0;
  double sum_sup = 0.0;
  for (const auto& z : Z.indices) {
    sup_b = std::max(sup_b, G.weights(z));
    sum_sup += basis::sup_norm(z);
  }
  const double size_exp =
      convention == SetSizeConvention::MainText
          ? 0.5
          : (std::isinf(G.exponent) ? 0.0 : 1.0 / G.exponent);
  const double B_Z = std::pow(static_cast<double>(m), size_exp) * sup_b;
  const double c_G = G.radius / B_Z;

  // density condition of the lower-bound theorem; the tolerance admits
  // amplitudes set exactly at the boundary
  const double lhs = 2.0 * c_G * sum_sup;
  if (lhs > 1.0 + 1e-9)
    throw condition_error("2 (L_G / B_Z) sum_z ||phi_z||_inf <= 1", lhs, 1.0);

  const auto signs = varshamov_gilbert(m, seed);

  PackingFamily family;
  family.signs = signs;
  family.amplitude = c_G;
  family.set_norm = B_Z;
  family.index_set = Z;
  family.members.reserve(signs.size());
  for (const auto& tau : signs) {
    CoefficientVector coeffs;
    for (int k = 0; k < m; ++k) coeffs[Z.indices[k]] = c_G * tau[k];
    SeriesDensity member(Z.dim, Z.kind, std::move(coeffs));
    // coefficient mass = c_G * sum_sup <= 0.5, so the analytic certificate
    // holds with min value >= 0.5
    family.members.push_back(certify_nonnegative(member));
  }
  return family;
}

double kl_divergence(const SeriesDensity& p, const SeriesDensity& q,
                     int nodes_per_axis) {
  if (p.dim() != q.dim() || p.kind() != q.kind())
    throw std::invalid_argument("kl_divergence: densities are incompatible");
  if (p.dim() > 2)
    throw std::invalid_argument("kl_divergence: tensor quadrature needs d <= 2");
  return quad::tensor_integral(
      p.dim(), nodes_per_axis, [&](std::span<const double> x) {
        const double qv = q(x);
        if (!(qv > 0.0))
          throw std::domain_error(
              "kl_divergence: q is not strictly positive at a quadrature node");
        const double pv = p(x);
        if (pv < -1e-12)
          throw std::domain_error(
              "kl_divergence: p is negative at a quadrature node");
        if (pv <= 0.0) return 0.0;  // p log p -> 0
        return pv * std::log(pv / qv);
      });
}

double l2_distance(const SeriesDensity& p, const SeriesDensity& q) {
  if (p.kind() != q.kind() || p.dim() != q.dim())
    throw std::invalid_argument("l2_distance: basis mismatch");
  double sq = 0.0;
  auto it = p.coefficients().begin();
  auto jt = q.coefficients().begin();
  const auto pe = p.coefficients().end();
  const auto qe = q.coefficients().end();
  while (it != pe || jt != qe) {
    double diff;
    if (jt == qe || (it != pe && it->first < jt->first)) {
      diff = it->second;
      ++it;
    } else if (it == pe || jt->first < it->first) {
      diff = jt->second;
      ++jt;
    } else {
      diff = it->second - jt->second;
      ++it;
      ++jt;
    }
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

double integral(const SeriesDensity& p, int nodes_per_axis) {
  return quad::tensor_integral(p.dim(), nodes_per_axis,
                               [&](std::span<const double> x) { return p(x); });
}

double positive_part_mass(const SeriesDensity& p, int nodes_per_axis) {
  return quad::tensor_integral(
      p.dim(), nodes_per_axis,
      [&](std::span<const double> x) { return std::max(p(x), 0.0); });
}

CoefficientVector coefficient_difference(const SeriesDensity& p,
                                         const SeriesDensity& q) {
  if (p.kind() != q.kind() || p.dim() != q.dim())
    throw std::invalid_argument("coefficient_difference: basis mismatch");
  CoefficientVector delta = p.coefficients();
  for (const auto& [z, c] : q.coefficients()) {
    auto [it, inserted] = delta.try_emplace(z, -c);
    if (!inserted) {
      it->second -= c;
      if (it->second == 0.0) delta.erase(it);
    }
  }
  return delta;
}

}  // namespace advloss::density

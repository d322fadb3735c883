#pragma once

// Finite-spectrum densities p = 1 + sum_z c_z phi_z on [0,1]^d.
//
// The constant coefficient is pinned at 1 and every other basis function
// integrates to zero, so unit mass is automatic. Keeping the spectral
// support finite makes adversarial losses and L^2 distances exactly
// computable (no tail truncation error anywhere in the risk path).

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "advloss/basis.hpp"
#include "advloss/loss.hpp"

namespace advloss::density {

using basis::BasisIndex;
using basis::BasisKind;
using basis::CoefficientVector;
using basis::TruncationSet;

class SeriesDensity {
 public:
  // Coefficients must exclude the constant index (its mass is fixed).
  SeriesDensity(int dim, BasisKind kind, CoefficientVector coeffs);

  static SeriesDensity uniform(int dim, BasisKind kind = BasisKind::Fourier);

  int dim() const { return dim_; }
  BasisKind kind() const { return kind_; }
  const CoefficientVector& coefficients() const { return coeffs_; }

  // 0 for absent indices, 1 for the constant.
  double coefficient(const BasisIndex& z) const;

  double operator()(std::span<const double> x) const;
  double operator()(double x) const {
    return (*this)(std::span<const double>(&x, 1));
  }

  // 1 + sum |c_z| * sup|phi_z|: an analytic upper bound on sup p, used as
  // the rejection-sampling envelope.
  double envelope() const;

  // sum |c_z| * sup|phi_z| (<= 1 certifies non-negativity analytically).
  double coefficient_mass() const;

  bool validated_nonnegative() const { return validated_; }

 private:
  int dim_;
  BasisKind kind_;
  CoefficientVector coeffs_;
  bool validated_ = false;

  friend SeriesDensity certify_nonnegative(const SeriesDensity&, int);
  friend struct PackingBuilder;
};

inline SeriesDensity make_density(int dim, BasisKind kind,
                                  CoefficientVector coeffs) {
  return SeriesDensity(dim, kind, std::move(coeffs));
}

enum class NonnegVerdict { Analytic, Certified, NotNonnegative, Unknown };

std::string to_string(NonnegVerdict v);

// Certificate from a grid check at resolution m per axis.
//
// Verdicts:
//   Analytic       sum |c_z| sup|phi_z| <= 1, so min p >= 1 - that sum >= 0
//                  (grid untouched; grid_min/slack refer to the analytic
//                  bound in that case).
//   Certified      grid_min - slack >= 0, where slack bounds the variation
//                  between grid points. Fourier: the gradient bound
//                  |grad phi_z| <= 2 pi ||z||_inf sup|phi_z| gives
//                  slack = (sum |c_z| sup|phi_z| 2 pi ||z||_inf) * sqrt(d)/(2m).
//                  Haar: slack = 0 when m is a power of two exceeding the
//                  deepest level (the grid then meets every constant piece).
//   NotNonnegative grid_min < 0 (a genuine density value is negative).
//   Unknown        everything else.
struct NonnegCertificate {
  double grid_min;
  double slack;
  NonnegVerdict verdict;

  bool nonnegative() const {
    return verdict == NonnegVerdict::Analytic ||
           verdict == NonnegVerdict::Certified;
  }
};

NonnegCertificate nonneg_check(const SeriesDensity& p, int grid_per_axis = 512);

// Returns a copy of p carrying the validated-nonnegative flag; throws
// condition_error when the certificate fails.
SeriesDensity certify_nonnegative(const SeriesDensity& p,
                                  int grid_per_axis = 512);

// Sign patterns tau in {-1,+1}^m with |T| >= 2^{m/8} and pairwise Hamming
// distance >= m/8 (the Varshamov-Gilbert guarantee), built by seeded greedy
// random search and verified exhaustively before returning. m >= 8.
std::vector<std::vector<int>> varshamov_gilbert(int m, std::uint64_t seed = 0);

// Which |Z|-power divides into B_Z: the main-text statement uses |Z|^{1/2}
// for both classes; the appendix restates with |Z|^{1/p}, |Z|^{1/q}.
enum class SetSizeConvention { MainText, Appendix };

struct PackingFamily {
  std::vector<SeriesDensity> members;        // p_tau = p_0 + c_G sum tau_z phi_z
  std::vector<std::vector<int>> signs;       // the tau patterns
  double amplitude;                          // c_G = L_G / B_Z
  double set_norm;                           // B_Z
  TruncationSet index_set;
};

// The lower-bound packing family over Z (which must exclude the constant).
// Preconditions checked: |Z| >= 8 and the density condition
// 2 (L_G / B_Z) sum_z sup|phi_z| <= 1; every member then has an analytic
// non-negativity certificate with min value >= 0.5 and lies in G.
PackingFamily packing_densities(const TruncationSet& Z,
                                const loss::EllipseClass& G,
                                SetSizeConvention convention =
                                    SetSizeConvention::MainText,
                                std::uint64_t seed = 0);

// KL(p || q) by composite Gauss-Legendre tensor quadrature (d <= 2).
// q must be strictly positive at every node. Validation oracle, not a hot
// path.
double kl_divergence(const SeriesDensity& p, const SeriesDensity& q,
                     int nodes_per_axis = 256);

// Parseval: sqrt( sum (c_z - c'_z)^2 ) over the union of supports.
double l2_distance(const SeriesDensity& p, const SeriesDensity& q);

// Quadrature of p over [0,1]^d (mass oracle; should return 1).
double integral(const SeriesDensity& p, int nodes_per_axis = 256);

// Quadrature of max(p, 0): the positive-part renormalization constant.
double positive_part_mass(const SeriesDensity& p, int nodes_per_axis = 256);

// Coefficient difference p - q over the union of supports (the constant
// cancels). Both densities must share the basis kind.
CoefficientVector coefficient_difference(const SeriesDensity& p,
                                         const SeriesDensity& q);

}  // namespace advloss::density

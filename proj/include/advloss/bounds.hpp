#pragma once

// Closed-form evaluators for the minimax upper/lower bounds and rate
// exponents, with admissibility diagnostics.

#include <functional>
#include <string>

#include "advloss/basis.hpp"
#include "advloss/density.hpp"
#include "advloss/loss.hpp"

namespace advloss::bounds {

using basis::TruncationSet;
using density::SetSizeConvention;
using loss::EllipseClass;

// sup-norm table; defaults to the basis sup norms when empty.
using SupNormFn = std::function<double(const basis::BasisIndex&)>;

struct UpperBoundReport {
  double variance;  // L_D n^{-1/2} ||{sup|phi_z| / a_z}||_{p', z in Z}
  double bias;      // L_D L_G ||{1/(a_z b_z)}||_{r, z not in Z}, r = 1/(1-1/p-1/q)
  double total;     // variance + bias

  // The variance constant c_{p'} is only pinned (=1) for p' = 2; for other
  // exponents the same formula is reported with this flag raised.
  bool constant_unspecified;

  // Non-zero only on the numeric-tail path (non-Sobolev weights): an
  // estimate of the mass beyond the enumeration cap, already folded into
  // the bias when finite.
  double bias_tail_remainder;

  // echoed inputs
  int zeta;
  std::size_t set_size;
  double n;
};

struct UpperBoundOptions {
  // Enumeration cap for the numeric bias tail (non-Sobolev weights only).
  int tail_cap = 64;
  // Override for the per-index sup norms (e.g. ||phi_z||_{L_P^inf}).
  SupNormFn sup_norm;
};

// Theorem-style risk bound for the truncated series estimator. The
// variance term is the exact finite sum over Z; the bias tail over the
// complement is evaluated analytically for Sobolev weights and numerically
// (cap + remainder estimate) otherwise. Requires 1 - 1/p - 1/q >= 0.
UpperBoundReport upper_bound_risk(const EllipseClass& D, const EllipseClass& G,
                                  const TruncationSet& Z, double n,
                                  const UpperBoundOptions& opts = {});

struct ParametricConstant {
  double A;        // partial sum over ||z||_inf <= cap of sup|phi_z|^2 / a_z^2
  bool converged;  // Sobolev: 2s > d; tables: shell ratio test
  double bound_factor;  // L_D sqrt(A); the rate bound is bound_factor / sqrt(n)
};

// The parametric-rate constant A = sum_z sup|phi_z|^2 / a_z^2, summed over
// the full enumerable range up to the cap.
ParametricConstant parametric_constant(const EllipseClass& D,
                                       basis::BasisKind kind, int d, int cap,
                                       const SupNormFn& sup_norm = {});

struct LowerBoundCondition {
  std::string name;
  double lhs;
  double rhs;
  bool holds;
};

struct LowerBoundReport {
  bool applicable;  // both conditions hold
  double value;     // L_G L_D |Z| / (64 A_Z B_Z); 0 when not applicable
  double A_Z;
  double B_Z;
  double amplitude_g;  // c_G = L_G / B_Z
  double amplitude_d;  // c_D = L_D / A_Z
  LowerBoundCondition information_condition;  // B_Z >= 16 L_G sqrt(n / log 2)
  LowerBoundCondition density_condition;  // 2 L_G/B_Z sum ||phi_z||_inf <= 1
};

// Fano/packing lower bound over the index set Z. Conditions are checked,
// never assumed; the report names whichever fails.
LowerBoundReport lower_bound(const EllipseClass& D, const EllipseClass& G,
                             const TruncationSet& Z, double n,
                             SetSizeConvention convention =
                                 SetSizeConvention::MainText);

struct RateSpec {
  double s;
  double t;
  int d;
  double exponent;  // min{1/2, (s+t)/(2t+d)}
  bool parametric;  // exponent == 1/2
};

// Sobolev minimax rate exponent. (s,t) = (0,0) is rejected.
RateSpec sobolev_rate(double s, double t, int d);

// Oracle truncation cutoff round(n^{1/(2t+d)}), at least 1.
int oracle_zeta(double t, int d, double n);

// The appendix tuning for the lower bound, (256 L_G^2 n / log 2)^{1/(2t+d)},
// rounded to the nearest integer (at least 1).
int lower_bound_zeta(double t, int d, double n, double L_G);

}  // namespace advloss::bounds

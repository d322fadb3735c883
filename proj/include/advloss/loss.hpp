#pragma once

// Exact evaluation of adversarial losses over generalized-ellipse
// discriminator classes.
//
// An ellipse class H_{p,a}(L) is the set of functions f whose weighted
// coefficient p-norm satisfies ||{a_z f_z}||_p <= L. For a finite signed
// coefficient vector D (a difference of two measures' basis coefficients),
// Hoelder duality gives the loss in closed form:
//
//   d(D) = sup { sum_z f_z D_z : ||{a_z f_z}||_p <= L }
//        = L * ||{D_z / a_z}||_{p'},      p' = p / (p - 1).
//
// For p in (1, inf) the supremum is attained at an explicit discriminator
// (the Hoelder equality case), which optimal_discriminator returns.

#include <map>

#include "advloss/basis.hpp"
#include "advloss/dataset.hpp"

namespace advloss::loss {

using basis::BasisIndex;
using basis::CoefficientVector;
using basis::WeightRule;

// H_{p,a}(L). exponent may be std::numeric_limits<double>::infinity();
// exponent = inf reads the membership norm as sup_z |a_z c_z|.
struct EllipseClass {
  double exponent;
  double radius;
  WeightRule weights;
};

// Hoelder conjugate p' = p/(p-1); p=1 -> inf, p=inf -> 1.
double hoelder_conjugate(double p);

// L * ||{D_z / a_z}||_{p'}. Every support index must have a positive
// weight. An empty (or all-zero) D gives 0.
double adversarial_loss(const CoefficientVector& delta, const EllipseClass& D);

// The maximizing discriminator f with ||{a_z f_z}||_p = L and
// sum_z f_z D_z = adversarial_loss(D). Requires p in (1, inf) and D != 0.
CoefficientVector optimal_discriminator(const CoefficientVector& delta,
                                        const EllipseClass& D);

struct MembershipResult {
  double norm;
  bool is_member;
};

// ||{a_z c_z}||_p compared against the radius.
MembershipResult ellipse_membership(const CoefficientVector& c,
                                    const EllipseClass& E);

// Spectrum of a translation-invariant kernel, tabulated as sigma_z > 0 over
// a finite index set. The kernel it encodes is
//
//   k(x, y) = sum_z sigma_z^2 phi_z(x) phi_z(y),
//
// whose unit RKHS ball is the ellipse H_{2,a}(1) with a_z = 1/sigma_z, so
// the induced MMD is ||{sigma_z D_z}||_2 (small sigma at high frequencies
// makes the metric weak there).
class KernelSpectrum {
 public:
  explicit KernelSpectrum(std::map<BasisIndex, double> table);

  // sigma_z = ratio^{||z||_inf} over the full Fourier set ||z||_inf <= zmax.
  static KernelSpectrum geometric(double ratio, int zmax, int d = 1);

  const std::map<BasisIndex, double>& table() const { return table_; }

  // a_z = 1 / sigma_z, as a custom weight rule.
  WeightRule induced_weights() const;

  // H_{2,a}(L) with the induced weights (unit radius by default).
  EllipseClass mmd_class(double radius = 1.0) const;

  // sum over the table of a_z^{-2} = sum sigma_z^2.
  double squared_mass() const;

  double kernel(std::span<const double> x, std::span<const double> y) const;

 private:
  std::map<BasisIndex, double> table_;
};

// L * sqrt( sum_z sigma_z^2 D_z^2 ): adversarial_loss specialized to the
// kernel's ellipse.
double mmd_spectral(const CoefficientVector& delta, const KernelSpectrum& k,
                    double radius = 1.0);

// V-statistic MMD estimate between two samples,
//   sqrt( mean k(X,X') - 2 mean k(X,Y) + mean k(Y,Y') ),
// with means over all ordered pairs. For the finite-rank kernels used here
// this equals || mean psi(X) - mean psi(Y) ||_2 with feature map
// psi_z(x) = sigma_z phi_z(x), which is how it is computed (O(m |table|)
// instead of O(m^2) kernel evaluations; the value is identical).
double mmd_vstat(const Dataset& X, const Dataset& Y, const KernelSpectrum& k);

}  // namespace advloss::loss

#pragma once

// Orthonormal bases of L^2(lambda) on the unit cube [0,1]^d.
//
// Two families are supported:
//
//   Fourier (realified, tensorized): for a signed multi-index z in Z^d the
//   factor for coordinate j is
//       z_j = 0 :  1
//       z_j > 0 :  sqrt(2) * cos(2*pi*z_j*x_j)
//       z_j < 0 :  sqrt(2) * sin(2*pi*|z_j|*x_j)
//   and phi_z(x) is the product over coordinates. The all-zero multi-index
//   is the constant function 1 and is canonicalized to BasisIndex::constant().
//
//   Haar (d = 1 only): phi_{i,j}(x) = 2^{i/2} * psi(2^i x - (j-1)) with
//   psi = +1 on [0,1/2), -1 on [1/2,1), for level i >= 0 and position
//   j in [1, 2^i]. Together with the constant this is the full Haar system.
//
// Both families are orthonormal over [0,1]^d and orthogonal to the constant.

#include <compare>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace advloss::basis {

enum class BasisKind { Fourier, Haar };

std::string to_string(BasisKind kind);
BasisKind basis_kind_from_string(const std::string& name);

class BasisIndex {
 public:
  enum class Tag { Constant, Fourier, Haar };

  static BasisIndex constant() { return BasisIndex(); }
  // All-zero frequency vectors collapse to the constant index.
  static BasisIndex fourier(std::vector<int> freq);
  static BasisIndex haar(int level, int position);

  Tag tag() const { return tag_; }
  bool is_constant() const { return tag_ == Tag::Constant; }

  // Fourier accessors.
  const std::vector<int>& freq() const;
  int max_abs_freq() const;  // ||z||_inf; 0 for the constant index

  // Haar accessors.
  int level() const;
  int position() const;

  // Dimension of the domain this index lives on; 0 means "any" (constant).
  int dim() const;

  friend auto operator<=>(const BasisIndex&, const BasisIndex&) = default;

 private:
  BasisIndex() : tag_(Tag::Constant) {}

  Tag tag_;
  std::vector<int> freq_;
  int level_ = 0;
  int position_ = 0;
};

std::string to_string(const BasisIndex& z);

// Finite sparse coefficient vectors, keyed by basis index. std::map keeps
// iteration order deterministic.
using CoefficientVector = std::map<BasisIndex, double>;

// A finite truncation of the index family:
//   Fourier: all z with ||z||_inf <= zeta (constant excluded iff zero_mean),
//            in lexicographic order of the multi-index.
//   Haar:    all (i, j) with i <= zeta, j in [2^i], ordered by (i, j).
struct TruncationSet {
  BasisKind kind;
  int zeta;
  int dim;
  bool zero_mean;
  std::vector<BasisIndex> indices;

  std::size_t size() const { return indices.size(); }
  bool contains(const BasisIndex& z) const;
};

// Enumerates the truncation set. Haar requires d == 1.
TruncationSet enumerate_truncation(BasisKind kind, int zeta, int d,
                                   bool zero_mean = false);

// Pointwise evaluation of phi_z at x in [0,1]^d. Throws on dimension
// mismatch.
double eval_basis(const BasisIndex& z, std::span<const double> x);

inline double eval_basis(const BasisIndex& z, double x) {
  return eval_basis(z, std::span<const double>(&x, 1));
}

// sup_x |phi_z(x)|: 1 for the constant, sqrt(2)^{#nonzero coords} for
// Fourier, 2^{i/2} for Haar level i.
double sup_norm(const BasisIndex& z);

// Smoothness weights z -> a_z > 0 defining generalized ellipses.
//
//   sobolev(s):  (1 + ||z||_inf^2)^{s/2} for Fourier/constant, 2^{i*s} for
//                Haar level i. sobolev(0) is identically 1.
//   table rules: explicit per-index values; looking up a missing index is
//                an error.
class WeightRule {
 public:
  enum class Kind { Sobolev, Spectrum, Custom };

  static WeightRule sobolev(double s);
  static WeightRule spectrum(std::map<BasisIndex, double> table);
  static WeightRule custom(std::map<BasisIndex, double> table);

  Kind kind() const { return kind_; }
  double sobolev_order() const { return s_; }
  const std::map<BasisIndex, double>& table() const { return table_; }

  double operator()(const BasisIndex& z) const;

 private:
  WeightRule(Kind kind, double s, std::map<BasisIndex, double> table)
      : kind_(kind), s_(s), table_(std::move(table)) {}

  Kind kind_;
  double s_ = 0.0;
  std::map<BasisIndex, double> table_;
};

inline double weight(const WeightRule& rule, const BasisIndex& z) {
  return rule(z);
}

}  // namespace advloss::basis

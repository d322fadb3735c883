#include "advloss/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace advloss::basis {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
}  // namespace

std::string to_string(BasisKind kind) {
  return kind == BasisKind::Fourier ? "fourier" : "haar";
}

BasisKind basis_kind_from_string(const std::string& name) {
  if (name == "fourier") return BasisKind::Fourier;
  if (name == "haar") return BasisKind::Haar;
  throw std::invalid_argument("unknown basis kind: " + name);
}

BasisIndex BasisIndex::fourier(std::vector<int> freq) {
  if (freq.empty()) throw std::invalid_argument("fourier index needs d >= 1");
  if (std::all_of(freq.begin(), freq.end(), [](int k) { return k == 0; }))
    return constant();
  BasisIndex z;
  z.tag_ = Tag::Fourier;
  z.freq_ = std::move(freq);
  return z;
}

BasisIndex BasisIndex::haar(int level, int position) {
  if (level < 0)
    throw std::invalid_argument("haar level must be non-negative");
  if (position < 1 || position > (1 << level))
    throw std::invalid_argument("haar position must be in [1, 2^level]");
  BasisIndex z;
  z.tag_ = Tag::Haar;
  z.level_ = level;
  z.position_ = position;
  return z;
}

const std::vector<int>& BasisIndex::freq() const {
  if (tag_ != Tag::Fourier)
    throw std::logic_error("freq() requires a Fourier index");
  return freq_;
}

int BasisIndex::max_abs_freq() const {
  if (tag_ == Tag::Constant) return 0;
  if (tag_ != Tag::Fourier)
    throw std::logic_error("max_abs_freq() requires a Fourier index");
  int m = 0;
  for (int k : freq_) m = std::max(m, std::abs(k));
  return m;
}

int BasisIndex::level() const {
  if (tag_ != Tag::Haar) throw std::logic_error("level() requires a Haar index");
  return level_;
}

int BasisIndex::position() const {
  if (tag_ != Tag::Haar)
    throw std::logic_error("position() requires a Haar index");
  return position_;
}

int BasisIndex::dim() const {
  switch (tag_) {
    case Tag::Constant:
      return 0;
    case Tag::Fourier:
      return static_cast<int>(freq_.size());
    case Tag::Haar:
      return 1;
  }
  return 0;
}

std::string to_string(const BasisIndex& z) {
  switch (z.tag()) {
    case BasisIndex::Tag::Constant:
      return "1";
    case BasisIndex::Tag::Haar: {
      std::ostringstream os;
      os << "H(" << z.level() << "," << z.position() << ")";
      return os.str();
    }
    case BasisIndex::Tag::Fourier: {
      std::ostringstream os;
      os << "F(";
      const auto& f = z.freq();
      for (std::size_t j = 0; j < f.size(); ++j) {
        if (j) os << ",";
        os << f[j];
      }
      os << ")";
      return os.str();
    }
  }
  return "?";
}

bool TruncationSet::contains(const BasisIndex& z) const {
  if (z.is_constant()) return !zero_mean && kind == BasisKind::Fourier;
  if (kind == BasisKind::Fourier) {
    if (z.tag() != BasisIndex::Tag::Fourier) return false;
    if (z.dim() != dim) return false;
    return z.max_abs_freq() <= zeta;
  }
  if (z.tag() != BasisIndex::Tag::Haar) return false;
  return z.level() <= zeta;
}

namespace {

void enumerate_fourier(std::vector<int>& cur, int axis, int zeta, int d,
                       bool zero_mean, std::vector<BasisIndex>& out) {
  if (axis == d) {
    BasisIndex z = BasisIndex::fourier(cur);
    if (z.is_constant() && zero_mean) return;
    out.push_back(std::move(z));
    return;
  }
  for (int k = -zeta; k <= zeta; ++k) {
    cur[axis] = k;
    enumerate_fourier(cur, axis + 1, zeta, d, zero_mean, out);
  }
}

}  // namespace

TruncationSet enumerate_truncation(BasisKind kind, int zeta, int d,
                                   bool zero_mean) {
  if (zeta < 0) throw std::invalid_argument("zeta must be non-negative");
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  TruncationSet set{kind, zeta, d, zero_mean, {}};
  if (kind == BasisKind::Haar) {
    if (d != 1)
      throw std::invalid_argument(
          "haar basis is only supported in dimension 1");
    set.zero_mean = true;  // the (i,j) scheme never includes the constant
    set.indices.reserve((std::size_t{1} << (zeta + 1)) - 1);
    for (int i = 0; i <= zeta; ++i)
      for (int j = 1; j <= (1 << i); ++j)
        set.indices.push_back(BasisIndex::haar(i, j));
    return set;
  }
  std::vector<int> cur(static_cast<std::size_t>(d), 0);
  enumerate_fourier(cur, 0, zeta, d, zero_mean, set.indices);
  return set;
}

double eval_basis(const BasisIndex& z, std::span<const double> x) {
  switch (z.tag()) {
    case BasisIndex::Tag::Constant:
      return 1.0;
    case BasisIndex::Tag::Fourier: {
      const auto& f = z.freq();
      if (f.size() != x.size())
        throw std::invalid_argument("eval_basis: point dimension " +
                                    std::to_string(x.size()) +
                                    " does not match index " + to_string(z));
      double v = 1.0;
      for (std::size_t j = 0; j < f.size(); ++j) {
        const int k = f[j];
        if (k > 0)
          v *= kSqrt2 * std::cos(kTwoPi * k * x[j]);
        else if (k < 0)
          v *= kSqrt2 * std::sin(kTwoPi * (-k) * x[j]);
      }
      return v;
    }
    case BasisIndex::Tag::Haar: {
      if (x.size() != 1)
        throw std::invalid_argument("eval_basis: haar index needs d = 1");
      const int i = z.level();
      // y = 2^i x - (j - 1); support is y in [0, 1)
      const double y = std::ldexp(x[0], i) - (z.position() - 1);
      if (y < 0.0 || y >= 1.0) return 0.0;
      const double amp = std::exp2(0.5 * i);
      return y < 0.5 ? amp : -amp;
    }
  }
  return 0.0;
}

double sup_norm(const BasisIndex& z) {
  switch (z.tag()) {
    case BasisIndex::Tag::Constant:
      return 1.0;
    case BasisIndex::Tag::Fourier: {
      int active = 0;
      for (int k : z.freq())
        if (k != 0) ++active;
      return std::exp2(0.5 * active);  // sqrt(2)^active
    }
    case BasisIndex::Tag::Haar:
      return std::exp2(0.5 * z.level());
  }
  return 0.0;
}

WeightRule WeightRule::sobolev(double s) {
  if (s < 0.0) throw std::invalid_argument("sobolev order must be >= 0");
  return WeightRule(Kind::Sobolev, s, {});
}

WeightRule WeightRule::spectrum(std::map<BasisIndex, double> table) {
  for (const auto& [z, v] : table)
    if (!(v > 0.0))
      throw std::invalid_argument("spectrum weight must be positive at " +
                                  to_string(z));
  return WeightRule(Kind::Spectrum, 0.0, std::move(table));
}

WeightRule WeightRule::custom(std::map<BasisIndex, double> table) {
  for (const auto& [z, v] : table)
    if (!(v > 0.0))
      throw std::invalid_argument("custom weight must be positive at " +
                                  to_string(z));
  return WeightRule(Kind::Custom, 0.0, std::move(table));
}

double WeightRule::operator()(const BasisIndex& z) const {
  if (kind_ == Kind::Sobolev) {
    if (z.tag() == BasisIndex::Tag::Haar) return std::exp2(s_ * z.level());
    const double m = z.max_abs_freq();
    return std::pow(1.0 + m * m, 0.5 * s_);
  }
  auto it = table_.find(z);
  if (it == table_.end())
    throw std::invalid_argument("weight rule has no entry for index " +
                                to_string(z));
  return it->second;
}

}  // namespace advloss::basis

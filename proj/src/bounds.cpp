#include "advloss/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace advloss::bounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double default_or(const SupNormFn& fn, const basis::BasisIndex& z) {
  return fn ? fn(z) : basis::sup_norm(z);
}

// ||.||_r of a finite list given as r-th powers is not needed; the variance
// norm works directly on the values.
double lp_norm(const std::vector<double>& vals, double r) {
  if (std::isinf(r)) {
    double m = 0.0;
    for (double v : vals) m = std::max(m, v);
    return m;
  }
  double s = 0.0;
  for (double v : vals) s += std::pow(v, r);
  return std::pow(s, 1.0 / r);
}

// Number of Fourier multi-indices with ||z||_inf exactly k.
double fourier_shell_count(int k, int d) {
  if (k == 0) return 1.0;
  return std::pow(2.0 * k + 1.0, d) - std::pow(2.0 * k - 1.0, d);
}

// Sobolev bias tail || {1/(a_z b_z)} ||_r over the complement of the
// truncation, exact for r = inf and a rigorous shell sum plus integral
// remainder for finite r. Returns +inf when the tail diverges.
double sobolev_tail_norm(basis::BasisKind kind, int zeta, int d, double s,
                         double t, double r) {
  const double st = s + t;
  if (kind == basis::BasisKind::Haar) {
    if (std::isinf(r)) return std::exp2(-(zeta + 1.0) * st);
    const double rho = std::exp2(1.0 - r * st);  // level sums are geometric
    if (rho >= 1.0) return kInf;
    const double sum = std::pow(rho, zeta + 1.0) / (1.0 - rho);
    return std::pow(sum, 1.0 / r);
  }
  // Fourier: weights (1 + ||z||_inf^2)^{(s+t)/2}
  if (std::isinf(r)) {
    const double m = zeta + 1.0;
    return std::pow(1.0 + m * m, -0.5 * st);
  }
  if (r * st <= d) return kInf;  // shell count k^{d-1} beats the decay
  double sum = 0.0;
  int k = zeta + 1;
  for (; k <= 4 * zeta + 4096; ++k) {
    const double term =
        fourier_shell_count(k, d) * std::pow(1.0 + double(k) * k, -0.5 * r * st);
    sum += term;
    if (term < 1e-16 * sum) break;
  }
  // integral remainder: shell counts are <= 2 d 3^{d-1} k^{d-1}
  const double coef = 2.0 * d * std::pow(3.0, d - 1);
  const double expo = r * st - d;
  sum += coef * std::pow(static_cast<double>(k), -expo) / expo;
  return std::pow(sum, 1.0 / r);
}

}  // namespace

UpperBoundReport upper_bound_risk(const EllipseClass& D, const EllipseClass& G,
                                  const TruncationSet& Z, double n,
                                  const UpperBoundOptions& opts) {
  if (!(n >= 1.0)) throw std::invalid_argument("sample size must be >= 1");
  const double p = D.exponent;
  const double q = G.exponent;
  const double pp = loss::hoelder_conjugate(p);

  const double denom = 1.0 - 1.0 / p - (std::isinf(q) ? 0.0 : 1.0 / q);
  if (denom < -1e-12)
    throw std::invalid_argument(
        "unsupported (p, q): the bias exponent needs 1 - 1/p - 1/q >= 0");
  const double r = denom <= 1e-12 ? kInf : 1.0 / denom;

  // variance: exact finite sum over Z
  std::vector<double> terms;
  terms.reserve(Z.size());
  for (const auto& z : Z.indices)
    terms.push_back(default_or(opts.sup_norm, z) / D.weights(z));
  const double variance = D.radius * lp_norm(terms, pp) / std::sqrt(n);

  double bias;
  double remainder = 0.0;
  const bool sobolev_pair =
      D.weights.kind() == basis::WeightRule::Kind::Sobolev &&
      G.weights.kind() == basis::WeightRule::Kind::Sobolev;
  if (sobolev_pair) {
    bias = D.radius * G.radius *
           sobolev_tail_norm(Z.kind, Z.zeta, Z.dim, D.weights.sobolev_order(),
                             G.weights.sobolev_order(), r);
  } else {
    // numeric tail up to the cap, with a geometric remainder estimate from
    // the last two shells
    if (opts.tail_cap <= Z.zeta)
      throw std::invalid_argument("tail cap must exceed the truncation zeta");
    const auto full = basis::enumerate_truncation(Z.kind, opts.tail_cap, Z.dim,
                                                  Z.zero_mean);
    std::vector<double> shell(static_cast<std::size_t>(opts.tail_cap) + 1, 0.0);
    for (const auto& z : full.indices) {
      if (Z.contains(z)) continue;
      const int k = Z.kind == basis::BasisKind::Fourier ? z.max_abs_freq()
                                                        : z.level();
      const double v = 1.0 / (D.weights(z) * G.weights(z));
      shell[static_cast<std::size_t>(k)] +=
          std::isinf(r) ? 0.0 : std::pow(v, r);
      if (std::isinf(r))
        shell[static_cast<std::size_t>(k)] =
            std::max(shell[static_cast<std::size_t>(k)], v);
    }
    if (std::isinf(r)) {
      double m = 0.0;
      for (double v : shell) m = std::max(m, v);
      bias = D.radius * G.radius * m;
      remainder = shell.back();  // unknowable beyond the cap; report the edge
    } else {
      double sum = 0.0;
      for (double v : shell) sum += v;
      const double last = shell[shell.size() - 1];
      const double prev = shell[shell.size() - 2];
      if (prev > 0.0 && last / prev < 1.0)
        remainder = last * (last / prev) / (1.0 - last / prev);
      else if (last > 0.0)
        remainder = kInf;
      sum += std::isinf(remainder) ? 0.0 : remainder;
      bias = std::isinf(remainder)
                 ? kInf
                 : D.radius * G.radius * std::pow(sum, 1.0 / r);
    }
  }

  UpperBoundReport report;
  report.variance = variance;
  report.bias = bias;
  report.total = variance + bias;
  report.constant_unspecified = std::abs(pp - 2.0) > 1e-12;
  report.bias_tail_remainder = remainder;
  report.zeta = Z.zeta;
  report.set_size = Z.size();
  report.n = n;
  return report;
}

ParametricConstant parametric_constant(const EllipseClass& D,
                                       basis::BasisKind kind, int d, int cap,
                                       const SupNormFn& sup_norm) {
  if (cap < 1) throw std::invalid_argument("cap must be >= 1");
  const auto full = basis::enumerate_truncation(kind, cap, d,
                                                /*zero_mean=*/false);
  std::vector<double> shell(static_cast<std::size_t>(cap) + 1, 0.0);
  for (const auto& z : full.indices) {
    const int k = (kind == basis::BasisKind::Fourier || z.is_constant())
                      ? z.max_abs_freq()
                      : z.level();
    const double c = default_or(sup_norm, z);
    const double a = D.weights(z);
    shell[static_cast<std::size_t>(k)] += c * c / (a * a);
  }
  double A = 0.0;
  for (double v : shell) A += v;

  bool converged;
  if (D.weights.kind() == basis::WeightRule::Kind::Sobolev) {
    converged = 2.0 * D.weights.sobolev_order() > static_cast<double>(d);
  } else {
    // ratio test on the trailing shells
    converged = true;
    int checked = 0;
    for (std::size_t k = shell.size() - 1; k >= 2 && checked < 5; --k) {
      if (shell[k - 1] <= 0.0) break;
      if (shell[k] / shell[k - 1] >= 0.999) {
        converged = false;
        break;
      }
      ++checked;
    }
    if (checked == 0) converged = shell.back() == 0.0;
  }
  return {A, converged, D.radius * std::sqrt(A)};
}

LowerBoundReport lower_bound(const EllipseClass& D, const EllipseClass& G,
                             const TruncationSet& Z, double n,
                             SetSizeConvention convention) {
  for (const auto& z : Z.indices)
    if (z.is_constant())
      throw std::invalid_argument("lower_bound requires a zero-mean index set");
  const auto m = static_cast<double>(Z.size());

  double sup_a = 0.0, sup_b = 0.0, sum_sup = 0.0;
  for (const auto& z : Z.indices) {
    sup_a = std::max(sup_a, D.weights(z));
    sup_b = std::max(sup_b, G.weights(z));
    sum_sup += basis::sup_norm(z);
  }
  const double ea = convention == SetSizeConvention::MainText
                        ? 0.5
                        : (std::isinf(D.exponent) ? 0.0 : 1.0 / D.exponent);
  const double eb = convention == SetSizeConvention::MainText
                        ? 0.5
                        : (std::isinf(G.exponent) ? 0.0 : 1.0 / G.exponent);
  const double A_Z = std::pow(m, ea) * sup_a;
  const double B_Z = std::pow(m, eb) * sup_b;

  LowerBoundReport rep;
  rep.A_Z = A_Z;
  rep.B_Z = B_Z;
  rep.amplitude_g = G.radius / B_Z;
  rep.amplitude_d = D.radius / A_Z;

  const double info_rhs = 16.0 * G.radius * std::sqrt(n / std::numbers::ln2);
  rep.information_condition = {"B_Z >= 16 L_G sqrt(n/log 2)", B_Z, info_rhs,
                               B_Z >= info_rhs};
  const double dens_lhs = 2.0 * (G.radius / B_Z) * sum_sup;
  rep.density_condition = {"2 (L_G/B_Z) sum ||phi_z||_inf <= 1", dens_lhs, 1.0,
                           dens_lhs <= 1.0};

  rep.applicable =
      rep.information_condition.holds && rep.density_condition.holds;
  rep.value =
      rep.applicable ? G.radius * D.radius * m / (64.0 * A_Z * B_Z) : 0.0;
  return rep;
}

RateSpec sobolev_rate(double s, double t, int d) {
  if (s < 0.0 || t < 0.0) throw std::invalid_argument("s, t must be >= 0");
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  if (s == 0.0 && t == 0.0)
    throw std::invalid_argument(
        "sobolev_rate is undefined at (s, t) = (0, 0): no smoothness anywhere");
  const double raw = (s + t) / (2.0 * t + d);
  const double expo = std::min(0.5, raw);
  return {s, t, d, expo, raw >= 0.5};
}

int oracle_zeta(double t, int d, double n) {
  if (!(n >= 1.0)) throw std::invalid_argument("sample size must be >= 1");
  const double z = std::pow(n, 1.0 / (2.0 * t + d));
  return std::max(1, static_cast<int>(std::llround(z)));
}

int lower_bound_zeta(double t, int d, double n, double L_G) {
  const double z =
      std::pow(256.0 * L_G * L_G * n / std::numbers::ln2, 1.0 / (2.0 * t + d));
  return std::max(1, static_cast<int>(std::llround(z)));
}

}  // namespace advloss::bounds

#include "advloss/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "advloss/rng.hpp"

namespace advloss::montecarlo {

namespace {

// Runs fn(i) for i in [0, count) on `workers` threads. Work items must be
// independent; exceptions propagate to the caller.
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int k = std::min<int>(workers, static_cast<int>(count));
  pool.reserve(static_cast<std::size_t>(k));
  for (int w = 0; w < k; ++w) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// Sorted-ascending reduction: the mean of a multiset of losses does not
// depend on which worker produced which entry.
RiskEstimate reduce_losses(std::vector<double> losses) {
  std::sort(losses.begin(), losses.end());
  const auto r = static_cast<double>(losses.size());
  double sum = 0.0;
  for (double v : losses) sum += v;
  const double mean = sum / r;
  double sq = 0.0;
  for (double v : losses) sq += (v - mean) * (v - mean);
  const double se = losses.size() > 1 ? std::sqrt(sq / (r - 1.0) / r) : 0.0;
  return {mean, se, static_cast<int>(losses.size())};
}

}  // namespace

RejectionResult rejection_sample(const SeriesDensity& p, std::size_t m,
                                 std::uint64_t seed,
                                 const RejectionOptions& opts) {
  if (!p.validated_nonnegative() && !opts.positive_part)
    throw std::invalid_argument(
        "rejection_sample: density lacks a non-negativity certificate; pass "
        "positive_part to sample from max(p, 0)");

  const int d = p.dim();
  const double envelope = p.envelope();

  RejectionResult res;
  res.envelope = envelope;
  res.sample.dim = d;
  res.sample.flat.reserve(m * static_cast<std::size_t>(d));
  res.proposals = 0;

  rng::Rng gen(seed);
  std::vector<double> x(static_cast<std::size_t>(d));
  while (res.sample.size() < m) {
    for (int j = 0; j < d; ++j) x[static_cast<std::size_t>(j)] = gen.uniform01();
    const double y = envelope * gen.uniform01();
    ++res.proposals;
    if (y < p(std::span<const double>(x.data(), x.size())))
      res.sample.push_back(std::span<const double>(x.data(), x.size()));
  }
  res.acceptance_rate =
      static_cast<double>(m) / static_cast<double>(res.proposals);
  res.positive_mass = 1.0;
  if (opts.positive_part && !p.validated_nonnegative()) {
    if (d <= 2)
      res.positive_mass = density::positive_part_mass(p, opts.quadrature_nodes);
    else  // no tensor quadrature beyond d=2; estimate from the acceptance rate
      res.positive_mass = envelope * res.acceptance_rate;
  }
  return res;
}

namespace {

std::vector<basis::BasisIndex> resolve_indices(const SeriesDensity& truth,
                                               const ZetaRule& rule,
                                               const Dataset& data) {
  switch (rule.kind) {
    case ZetaRule::Kind::Fixed: {
      auto Z = basis::enumerate_truncation(truth.kind(), rule.zeta,
                                           truth.dim(), /*zero_mean=*/true);
      return std::move(Z.indices);
    }
    case ZetaRule::Kind::Oracle: {
      const int zeta = bounds::oracle_zeta(rule.t, truth.dim(),
                                           static_cast<double>(data.size()));
      auto Z = basis::enumerate_truncation(truth.kind(), zeta, truth.dim(),
                                           /*zero_mean=*/true);
      return std::move(Z.indices);
    }
    case ZetaRule::Kind::Adaptive: {
      const int cap = std::min(
          rule.zeta_max,
          estimator::zeta_grid_ceiling(data.size(), data.dim));
      std::vector<int> grid(static_cast<std::size_t>(cap) + 1);
      for (int i = 0; i <= cap; ++i) grid[static_cast<std::size_t>(i)] = i;
      const int zeta = estimator::adaptive_zeta(data, truth.kind(), grid);
      auto Z = basis::enumerate_truncation(truth.kind(), zeta, truth.dim(),
                                           /*zero_mean=*/true);
      return std::move(Z.indices);
    }
    case ZetaRule::Kind::Support: {
      std::vector<basis::BasisIndex> out;
      out.reserve(truth.coefficients().size());
      for (const auto& [z, c] : truth.coefficients()) out.push_back(z);
      return out;
    }
  }
  return {};
}

double one_replication_loss(const SeriesDensity& truth,
                            const EllipseClass& loss_class, std::size_t n,
                            const ZetaRule& rule, std::uint64_t child) {
  const auto draw = rejection_sample(truth, n, child);
  const auto indices = resolve_indices(truth, rule, draw.sample);
  const auto estimate = estimator::series_estimate(
      draw.sample, std::span<const basis::BasisIndex>(indices));
  const auto delta = density::coefficient_difference(truth, estimate);
  return loss::adversarial_loss(delta, loss_class);
}

}  // namespace

RiskEstimate estimate_risk(const SeriesDensity& truth, const EllipseClass& loss,
                           std::size_t n, const ZetaRule& rule, int R,
                           std::uint64_t seed, std::uint64_t stream,
                           int workers) {
  if (R < 1) throw std::invalid_argument("need at least one replication");
  std::vector<double> losses(static_cast<std::size_t>(R));
  parallel_for(static_cast<std::size_t>(R), workers, [&](std::size_t j) {
    losses[j] =
        one_replication_loss(truth, loss, n, rule,
                             rng::child_seed(seed, stream, j));
  });
  return reduce_losses(std::move(losses));
}

namespace {
// Stream tags reserved for non-replication randomness.
constexpr std::uint64_t kTruthStream = 0xAD170000ULL;
}  // namespace

SeriesDensity make_truth(const TruthSpec& spec, std::size_t n,
                         std::uint64_t seed) {
  switch (spec.kind) {
    case TruthSpec::Kind::Explicit: {
      if (!spec.explicit_density)
        throw std::invalid_argument("explicit truth spec without a density");
      return density::certify_nonnegative(*spec.explicit_density);
    }
    case TruthSpec::Kind::FixedModes: {
      if (spec.mode_count < 1 || spec.freq_cap < 1 ||
          spec.mode_count > 2 * spec.freq_cap)
        throw std::invalid_argument("infeasible fixed-modes truth spec");
      rng::Rng gen(rng::child_seed(seed, kTruthStream, 0));
      for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<int> freqs;
        while (static_cast<int>(freqs.size()) < spec.mode_count) {
          const int mag =
              1 + static_cast<int>(gen.below(
                      static_cast<std::uint64_t>(spec.freq_cap)));
          const int z = gen.coin() ? mag : -mag;
          if (std::find(freqs.begin(), freqs.end(), z) == freqs.end())
            freqs.push_back(z);
        }
        basis::CoefficientVector coeffs;
        for (int z : freqs) {
          const double mag = gen.uniform(spec.coef_min, spec.coef_max);
          coeffs[basis::BasisIndex::fourier({z})] = gen.coin() ? mag : -mag;
        }
        SeriesDensity truth(1, basis::BasisKind::Fourier, std::move(coeffs));
        if (truth.coefficient_mass() <= 1.0)
          return density::certify_nonnegative(truth);
        // over the analytic budget: redraw
      }
      throw std::runtime_error("could not draw a certified fixed-modes truth");
    }
    case TruthSpec::Kind::Growing: {
      const int zeta = bounds::oracle_zeta(spec.t, 1, static_cast<double>(n));
      rng::Rng gen(rng::child_seed(seed, kTruthStream, n));
      const double decay = spec.t + 0.5 + spec.epsilon;
      basis::CoefficientVector coeffs;
      double mass = 0.0;
      for (int k = 1; k <= zeta; ++k) {
        const double mag = std::pow(static_cast<double>(k), -decay);
        for (int sign : {+1, -1}) {
          const double c = (gen.coin() ? mag : -mag);
          coeffs[basis::BasisIndex::fourier({sign * k})] = c;
          mass += mag * std::numbers::sqrt2;
        }
      }
      const double scale = spec.mass_budget / mass;
      for (auto& [z, c] : coeffs) c *= scale;
      return density::certify_nonnegative(
          SeriesDensity(1, basis::BasisKind::Fourier, std::move(coeffs)));
    }
  }
  throw std::logic_error("unreachable truth kind");
}

EllipseClass LossSpec::build() const {
  if (spectral) {
    const auto k = loss::KernelSpectrum::geometric(spectrum_ratio, spectrum_zmax);
    return k.mmd_class(radius);
  }
  return EllipseClass{p, radius, basis::WeightRule::sobolev(sobolev_s)};
}

ExperimentConfig ExperimentConfig::parametric(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.regime = "parametric";
  cfg.seed = seed;
  for (int e = 7; e <= 14; ++e) cfg.n_grid.push_back(std::size_t{1} << e);
  cfg.replications = 200;
  cfg.truth = TruthSpec::fixed_modes(6, 0.05, 0.12, 8);
  cfg.loss = LossSpec{};  // p = 2, unweighted, radius 1
  cfg.zeta_rule = ZetaRule::support();
  return cfg;
}

ExperimentConfig ExperimentConfig::nonparametric(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.regime = "nonparametric";
  cfg.seed = seed;
  for (int e = 7; e <= 14; ++e) cfg.n_grid.push_back(std::size_t{1} << e);
  cfg.replications = 200;
  cfg.truth = TruthSpec::growing(1.0);
  cfg.loss = LossSpec{};
  cfg.zeta_rule = ZetaRule::oracle(1.0);
  return cfg;
}

void ExperimentConfig::validate() const {
  if (n_grid.empty()) throw std::invalid_argument("n grid is empty");
  for (std::size_t i = 0; i + 1 < n_grid.size(); ++i)
    if (n_grid[i] >= n_grid[i + 1])
      throw std::invalid_argument("n grid must be strictly increasing");
  if (replications < 1)
    throw std::invalid_argument("replications must be >= 1");
  if (regime != "parametric" && regime != "nonparametric" &&
      regime != "custom")
    throw std::invalid_argument("unknown regime: " + regime);
}

RateFit fit_rate(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2)
    throw std::invalid_argument("rate fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [n, risk] : points) {
    if (!(risk > 0.0))
      throw std::invalid_argument("rate fit requires positive risks");
    if (!(n > 0.0))
      throw std::invalid_argument("rate fit requires positive sample sizes");
    const double x = std::log(n);
    const double y = std::log(risk);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const auto k = static_cast<double>(points.size());
  const double denom = k * sxx - sx * sx;
  if (denom == 0.0)
    throw std::invalid_argument("rate fit needs distinct sample sizes");
  const double slope = (k * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / k;
  double rss = 0.0;
  for (const auto& [n, risk] : points) {
    const double r = std::log(risk) - (intercept + slope * std::log(n));
    rss += r * r;
  }
  return {slope, intercept, std::sqrt(rss / k)};
}

RiskCurve run_risk_curve(const ExperimentConfig& cfg) {
  cfg.validate();
  RiskCurve curve;
  curve.points.reserve(cfg.n_grid.size());
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    const std::size_t n = cfg.n_grid[i];
    const auto truth = make_truth(cfg.truth, n, cfg.seed);
    const auto est = estimate_risk(truth, cfg.loss.build(), n, cfg.zeta_rule,
                                   cfg.replications, cfg.seed, i, cfg.workers);
    curve.points.push_back({n, est.mean, est.std_error, est.replications});
  }
  std::vector<std::pair<double, double>> pts;
  pts.reserve(curve.points.size());
  for (const auto& pt : curve.points)
    pts.emplace_back(static_cast<double>(pt.n), pt.mean);
  const auto fit = fit_rate(pts);
  curve.slope = fit.slope;
  curve.intercept = fit.intercept;
  curve.residual_rms = fit.residual_rms;
  return curve;
}

std::vector<EquivalenceRow> sampling_equivalence_experiment(
    const SeriesDensity& truth, const EllipseClass& loss_class, std::size_t n,
    std::span<const std::size_t> m_grid, int replications, std::uint64_t seed,
    const ZetaRule& rule, int workers) {
  if (m_grid.empty()) throw std::invalid_argument("m grid is empty");
  if (replications < 1)
    throw std::invalid_argument("replications must be >= 1");

  const auto R = static_cast<std::size_t>(replications);
  std::vector<double> direct(R);
  std::vector<std::vector<double>> two_stage(m_grid.size(),
                                             std::vector<double>(R));
  std::vector<std::vector<double>> deficit(m_grid.size(),
                                           std::vector<double>(R));

  parallel_for(R, workers, [&](std::size_t j) {
    const auto draw =
        rejection_sample(truth, n, rng::child_seed(seed, 0, j));
    const auto indices = resolve_indices(truth, rule, draw.sample);
    const auto est = estimator::series_estimate(
        draw.sample, std::span<const basis::BasisIndex>(indices));
    direct[j] = loss::adversarial_loss(
        density::coefficient_difference(truth, est), loss_class);

    RejectionOptions opts;
    opts.positive_part = true;
    for (std::size_t k = 0; k < m_grid.size(); ++k) {
      const auto fake = rejection_sample(est, m_grid[k],
                                         rng::child_seed(seed, k + 1, j), opts);
      const auto re_est = estimator::series_estimate(
          fake.sample, std::span<const basis::BasisIndex>(indices));
      two_stage[k][j] = loss::adversarial_loss(
          density::coefficient_difference(truth, re_est), loss_class);
      deficit[k][j] = 1.0 - fake.positive_mass;
    }
  });

  std::vector<EquivalenceRow> rows;
  rows.reserve(m_grid.size());
  const auto d_est = reduce_losses(direct);
  for (std::size_t k = 0; k < m_grid.size(); ++k) {
    std::vector<double> gaps(R);
    for (std::size_t j = 0; j < R; ++j) gaps[j] = two_stage[k][j] - direct[j];
    const auto t_est = reduce_losses(two_stage[k]);
    const auto g_est = reduce_losses(std::move(gaps));
    const auto def_est = reduce_losses(deficit[k]);
    rows.push_back({m_grid[k], d_est.mean, d_est.std_error, t_est.mean,
                    t_est.std_error, g_est.mean, g_est.std_error,
                    def_est.mean});
  }
  return rows;
}

}  // namespace advloss::montecarlo

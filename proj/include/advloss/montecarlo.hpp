#pragma once

// Samplers and the simulated convergence-rate experiments.
//
// Reproducibility contract: every experiment takes one master seed; the
// work unit for (n-grid index i, replication j) draws its randomness from
// rng::child_seed(master, i, j). Replications may therefore run on any
// number of workers, and per-replication losses are sorted before reduction,
// so means are bit-identical no matter how the work was partitioned.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "advloss/bounds.hpp"
#include "advloss/dataset.hpp"
#include "advloss/density.hpp"
#include "advloss/estimator.hpp"
#include "advloss/loss.hpp"

namespace advloss::montecarlo {

using density::SeriesDensity;
using loss::EllipseClass;

struct RejectionOptions {
  // Sample from max(p, 0) renormalized instead of requiring a certified
  // density. The renormalization mass is computed by quadrature (d <= 2)
  // and reported in the result.
  bool positive_part = false;
  int quadrature_nodes = 256;
};

struct RejectionResult {
  Dataset sample;
  double envelope;          // 1 + sum |c_z| sup|phi_z|
  std::uint64_t proposals;  // total proposals drawn
  double acceptance_rate;   // sample size / proposals
  double positive_mass;     // integral of max(p,0); 1 for certified densities
};

// Exact sampling from p by rejection against the uniform proposal under the
// analytic envelope. p must carry a non-negativity certificate unless
// positive_part is set. Deterministic given the seed.
RejectionResult rejection_sample(const SeriesDensity& p, std::size_t m,
                                 std::uint64_t seed,
                                 const RejectionOptions& opts = {});

// How the estimator's truncation is chosen inside an experiment.
struct ZetaRule {
  enum class Kind {
    Fixed,    // zeta as given
    Oracle,   // zeta = round(n^{1/(2t+d)})
    Adaptive, // leave-one-out CV over {0, ..., zeta_max}
    Support   // the truth's exact spectral support
  };
  Kind kind = Kind::Support;
  int zeta = 0;        // Fixed
  double t = 1.0;      // Oracle
  int zeta_max = 64;   // Adaptive

  static ZetaRule fixed(int zeta) { return {Kind::Fixed, zeta, 0.0, 0}; }
  static ZetaRule oracle(double t) { return {Kind::Oracle, 0, t, 0}; }
  static ZetaRule adaptive(int zeta_max) {
    return {Kind::Adaptive, 0, 0.0, zeta_max};
  }
  static ZetaRule support() { return {}; }
};

struct RiskEstimate {
  double mean;
  double std_error;
  int replications;
};

// R independent replications of: draw n points from the truth, fit the
// series estimate, evaluate the adversarial loss on the exact coefficient
// difference over the union of spectra. No quadrature in the risk path.
RiskEstimate estimate_risk(const SeriesDensity& truth, const EllipseClass& loss,
                           std::size_t n, const ZetaRule& rule, int R,
                           std::uint64_t seed, std::uint64_t stream = 0,
                           int workers = 1);

// Synthetic truth specifications for the experiment harness.
struct TruthSpec {
  enum class Kind { FixedModes, Growing, Explicit };
  Kind kind = Kind::FixedModes;

  // FixedModes: `mode_count` distinct nonzero frequencies in [-freq_cap,
  // freq_cap] (d = 1), magnitudes uniform in [coef_min, coef_max], random
  // signs; redrawn until the analytic non-negativity certificate holds.
  int mode_count = 6;
  double coef_min = 0.05;
  double coef_max = 0.12;
  int freq_cap = 8;

  // Growing: modes 0 < |z| <= round(n^{1/(2t+1)}) with |c_z| proportional
  // to |z|^{-(t + 0.5 + epsilon)}, random signs, scaled so that
  // sum |c_z| sqrt(2) = mass_budget.
  double t = 1.0;
  double epsilon = 0.05;
  double mass_budget = 0.9;

  std::optional<SeriesDensity> explicit_density;

  static TruthSpec fixed_modes(int count, double cmin, double cmax, int cap) {
    TruthSpec s;
    s.kind = Kind::FixedModes;
    s.mode_count = count;
    s.coef_min = cmin;
    s.coef_max = cmax;
    s.freq_cap = cap;
    return s;
  }
  static TruthSpec growing(double t) {
    TruthSpec s;
    s.kind = Kind::Growing;
    s.t = t;
    return s;
  }
};

// Builds the truth for sample size n (FixedModes/Explicit ignore n). The
// result carries an analytic non-negativity certificate.
SeriesDensity make_truth(const TruthSpec& spec, std::size_t n,
                         std::uint64_t seed);

struct LossSpec {
  double p = 2.0;
  double radius = 1.0;
  // sobolev order, or a geometric kernel spectrum sigma_z = ratio^{|z|}
  bool spectral = false;
  double sobolev_s = 0.0;
  double spectrum_ratio = 0.5;
  int spectrum_zmax = 30;

  EllipseClass build() const;
};

struct ExperimentConfig {
  std::string regime = "custom";  // parametric | nonparametric | custom
  std::uint64_t seed = 1;
  std::vector<std::size_t> n_grid;
  int replications = 200;
  TruthSpec truth;
  LossSpec loss;
  ZetaRule zeta_rule;
  int workers = 1;

  static ExperimentConfig parametric(std::uint64_t seed = 1);
  static ExperimentConfig nonparametric(std::uint64_t seed = 1);
  void validate() const;
};

struct RiskCurve {
  struct Point {
    std::size_t n;
    double mean;
    double std_error;
    int replications;
  };
  std::vector<Point> points;
  double slope;
  double intercept;
  double residual_rms;
};

struct RateFit {
  double slope;
  double intercept;
  double residual_rms;
};

// OLS fit of log(risk) against log(n). Needs >= 2 points, all risks > 0.
RateFit fit_rate(std::span<const std::pair<double, double>> points);

// estimate_risk across the config's n-grid plus the log-log slope fit.
// Deterministic given the master seed, independent of worker count.
RiskCurve run_risk_curve(const ExperimentConfig& cfg);

// One row of the density-estimation-versus-sampling comparison: estimate
// P_hat from n real points, draw m fake points from its positive part,
// re-estimate P_hat' from those, and compare losses to the truth.
struct EquivalenceRow {
  std::size_t m;
  double direct_mean;     // d(P, P_hat)
  double direct_stderr;
  double two_stage_mean;  // d(P, P_hat')
  double two_stage_stderr;
  double gap_mean;        // two-stage minus direct
  double gap_stderr;
  double renorm_deficit_mean;  // 1 - integral of max(P_hat, 0)
};

std::vector<EquivalenceRow> sampling_equivalence_experiment(
    const SeriesDensity& truth, const EllipseClass& loss, std::size_t n,
    std::span<const std::size_t> m_grid, int replications, std::uint64_t seed,
    const ZetaRule& rule = ZetaRule::support(), int workers = 1);

}  // namespace advloss::montecarlo

#pragma once

// The truncated orthogonal series estimator and its leave-one-out
// cross-validated tuning.
//
//   P_hat_z = (1/n) sum_i phi_z(X_i),       P_hat = 1 + sum_{z in Z} P_hat_z phi_z
//
// The estimate is the raw linear estimator: it is not clipped or
// renormalized even when it dips negative (sampling from it goes through
// the positive part, see the montecarlo module).

#include <span>
#include <vector>

#include "advloss/basis.hpp"
#include "advloss/dataset.hpp"
#include "advloss/density.hpp"

namespace advloss::estimator {

using basis::BasisIndex;
using basis::BasisKind;
using basis::TruncationSet;

// Exact sample mean of phi_z over the data, accumulated with pairwise
// summation (so partitioned/parallel evaluation reproduces the same value
// up to the usual 1e-10 contract).
double empirical_coefficient(const Dataset& data, const BasisIndex& z);

// Series estimate over an explicit zero-mean index list; constant indices
// are skipped (their coefficient is identically 1 anyway).
density::SeriesDensity series_estimate(const Dataset& data,
                                       std::span<const BasisIndex> indices);

density::SeriesDensity series_estimate(const Dataset& data,
                                       const TruncationSet& Z);

// Leave-one-out CV score
//   J(zeta) = ||P_hat||_2^2 - (2/n) sum_i P_hat_{-i}(X_i)
// computed in O(n |Z|) through the exact algebraic downdate
//   P_hat_{-i,z} = (n P_hat_z - phi_z(X_i)) / (n - 1).
// J(0) = -1 for every dataset (Fourier; the empty truncation).
double cv_score(const Dataset& data, BasisKind kind, int zeta);

// J over a whole zeta grid at the cost of the largest set: per-mode score
// contributions are additive across nested truncations.
std::vector<double> cv_profile(const Dataset& data, BasisKind kind,
                               std::span<const int> grid);

// argmin of cv_score over the grid, ties broken toward the smallest zeta.
// The grid must be non-empty, strictly increasing, and contained in
// {0, ..., ceil(n^{1/d})}.
int adaptive_zeta(const Dataset& data, BasisKind kind,
                  std::span<const int> grid);

// Largest admissible grid value, ceil(n^{1/d}).
int zeta_grid_ceiling(std::size_t n, int d);

}  // namespace advloss::estimator

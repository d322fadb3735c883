#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "advloss/basis.hpp"
#include "advloss/quadrature.hpp"

using namespace advloss;
using basis::BasisIndex;
using basis::BasisKind;

namespace {

// Independent textbook Haar oracle: psi(x) = +1 on [0,1/2), -1 on [1/2,1),
// psi_{i,j}(x) = 2^{i/2} psi(2^i x - (j-1)).
double haar_oracle(int i, int j, double x) {
  const double y = std::pow(2.0, i) * x - (j - 1);
  if (y < 0.0 || y >= 1.0) return 0.0;
  const double amp = std::pow(2.0, 0.5 * i);
  return y < 0.5 ? amp : -amp;
}

// 1-D inner product oracles at 2048 points: composite Gauss-Legendre for
// the trig system, aligned midpoint rule for the (piecewise constant) Haar
// products.
double gram_entry_fourier(const BasisIndex& a, const BasisIndex& b) {
  const auto rule = quad::composite_gauss(2048);
  double s = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    s += rule.weights[k] * basis::eval_basis(a, rule.nodes[k]) *
         basis::eval_basis(b, rule.nodes[k]);
  return s;
}

double gram_entry_haar(const BasisIndex& a, const BasisIndex& b) {
  const int m = 2048;
  double s = 0.0;
  for (int k = 0; k < m; ++k) {
    const double x = (k + 0.5) / m;
    s += basis::eval_basis(a, x) * basis::eval_basis(b, x);
  }
  return s / m;
}

}  // namespace

TEST_SUITE("basis") {

TEST_CASE("fourier enumeration matches the definition") {
  const auto full = basis::enumerate_truncation(BasisKind::Fourier, 1, 1);
  REQUIRE(full.size() == 3);  // {-1, 0 (constant), +1}
  CHECK(full.indices[0] == BasisIndex::fourier({-1}));
  CHECK(full.indices[1] == BasisIndex::constant());
  CHECK(full.indices[2] == BasisIndex::fourier({1}));

  const auto zm = basis::enumerate_truncation(BasisKind::Fourier, 1, 1, true);
  CHECK(zm.size() == 2);

  CHECK(basis::enumerate_truncation(BasisKind::Fourier, 2, 2).size() == 25);
}

TEST_CASE("haar enumeration lists (i, j) with i <= zeta") {
  const auto Z = basis::enumerate_truncation(BasisKind::Haar, 2, 1);
  REQUIRE(Z.size() == 7);
  CHECK(Z.indices[0] == BasisIndex::haar(0, 1));
  CHECK(Z.indices[1] == BasisIndex::haar(1, 1));
  CHECK(Z.indices[2] == BasisIndex::haar(1, 2));
  CHECK(Z.indices[3] == BasisIndex::haar(2, 1));
  CHECK(Z.indices[6] == BasisIndex::haar(2, 4));

  CHECK_THROWS_AS(basis::enumerate_truncation(BasisKind::Haar, 2, 2),
                  std::invalid_argument);
}

TEST_CASE("enumeration cardinalities match the closed forms") {
  for (int zeta = 0; zeta <= 6; ++zeta) {
    for (int d = 1; d <= 3; ++d) {
      const auto set = basis::enumerate_truncation(BasisKind::Fourier, zeta, d);
      CHECK(set.size() ==
            static_cast<std::size_t>(std::pow(2 * zeta + 1, d)));
    }
    const auto haar = basis::enumerate_truncation(BasisKind::Haar, zeta, 1);
    CHECK(haar.size() == (std::size_t{1} << (zeta + 1)) - 1);
  }
}

TEST_CASE("pointwise evaluation") {
  CHECK(basis::eval_basis(BasisIndex::constant(), 0.37) == 1.0);
  CHECK(basis::eval_basis(BasisIndex::fourier({1}), 0.0) ==
        doctest::Approx(std::numbers::sqrt2).epsilon(1e-14));
  CHECK(basis::eval_basis(BasisIndex::fourier({-1}), 0.0) ==
        doctest::Approx(0.0).epsilon(1e-14));

  // Haar against the independent oracle
  CHECK(basis::eval_basis(BasisIndex::haar(1, 1), 0.1) ==
        doctest::Approx(std::numbers::sqrt2));
  CHECK(basis::eval_basis(BasisIndex::haar(1, 1), 0.4) ==
        doctest::Approx(-std::numbers::sqrt2));
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i <= 4; ++i)
    for (int j = 1; j <= (1 << i); ++j)
      for (int rep = 0; rep < 50; ++rep) {
        const double x = u(gen);
        CHECK(basis::eval_basis(BasisIndex::haar(i, j), x) ==
              doctest::Approx(haar_oracle(i, j, x)));
      }

  const double pt[2] = {0.3, 0.4};
  CHECK_THROWS_AS(basis::eval_basis(BasisIndex::fourier({1}),
                                    std::span<const double>(pt, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(basis::eval_basis(BasisIndex::haar(0, 1),
                                    std::span<const double>(pt, 2)),
                  std::invalid_argument);
}

TEST_CASE("sup norms") {
  CHECK(basis::sup_norm(BasisIndex::constant()) == 1.0);
  CHECK(basis::sup_norm(BasisIndex::haar(3, 2)) ==
        doctest::Approx(std::pow(2.0, 1.5)));
  CHECK(basis::sup_norm(BasisIndex::fourier({1, 0})) ==
        doctest::Approx(std::numbers::sqrt2));

  // sup dominates |phi| at random points
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& z :
       basis::enumerate_truncation(BasisKind::Fourier, 4, 1).indices) {
    const double sup = basis::sup_norm(z);
    for (int rep = 0; rep < 10000; ++rep)
      CHECK(std::abs(basis::eval_basis(z, u(gen))) <= sup + 1e-12);
  }
  for (const auto& z :
       basis::enumerate_truncation(BasisKind::Fourier, 2, 2).indices) {
    const double sup = basis::sup_norm(z);
    double x[2];
    for (int rep = 0; rep < 2000; ++rep) {
      x[0] = u(gen);
      x[1] = u(gen);
      CHECK(std::abs(basis::eval_basis(z, std::span<const double>(x, 2))) <=
            sup + 1e-12);
    }
  }
  for (const auto& z :
       basis::enumerate_truncation(BasisKind::Haar, 4, 1).indices) {
    const double sup = basis::sup_norm(z);
    for (int rep = 0; rep < 2000; ++rep)
      CHECK(std::abs(basis::eval_basis(z, u(gen))) <= sup + 1e-12);
  }
}

TEST_CASE("smoothness weights") {
  const auto s1 = basis::WeightRule::sobolev(1.0);
  const auto s2 = basis::WeightRule::sobolev(2.0);
  CHECK(s1(BasisIndex::constant()) == doctest::Approx(1.0));
  CHECK(s2(BasisIndex::fourier({3})) == doctest::Approx(10.0));
  CHECK(s2(BasisIndex::fourier({-3, 1})) == doctest::Approx(10.0));
  CHECK(s1(BasisIndex::haar(2, 1)) == doctest::Approx(4.0));

  const auto s0 = basis::WeightRule::sobolev(0.0);
  for (const auto& z :
       basis::enumerate_truncation(BasisKind::Fourier, 3, 2).indices)
    CHECK(s0(z) == doctest::Approx(1.0));

  auto table = basis::WeightRule::spectrum(
      {{BasisIndex::fourier({1}), 0.5}, {BasisIndex::fourier({-1}), 0.5}});
  CHECK(table(BasisIndex::fourier({1})) == doctest::Approx(0.5));
  CHECK_THROWS_AS(table(BasisIndex::fourier({2})), std::invalid_argument);
  CHECK_THROWS_AS(
      basis::WeightRule::spectrum({{BasisIndex::fourier({1}), 0.0}}),
      std::invalid_argument);
}

TEST_CASE("orthonormality via quadrature (d = 1)") {
  const auto fourier = basis::enumerate_truncation(BasisKind::Fourier, 8, 1);
  for (std::size_t i = 0; i < fourier.size(); ++i)
    for (std::size_t j = i; j < fourier.size(); ++j) {
      const double g = gram_entry_fourier(fourier.indices[i],
                                          fourier.indices[j]);
      CHECK(g == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-8));
    }

  auto haar = basis::enumerate_truncation(BasisKind::Haar, 5, 1);
  haar.indices.push_back(BasisIndex::constant());  // full system incl. p_0
  for (std::size_t i = 0; i < haar.size(); ++i)
    for (std::size_t j = i; j < haar.size(); ++j) {
      const double g = gram_entry_haar(haar.indices[i], haar.indices[j]);
      CHECK(g == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-8));
    }
}

TEST_CASE("index bookkeeping") {
  CHECK(BasisIndex::fourier({0, 0}) == BasisIndex::constant());
  CHECK(BasisIndex::fourier({2, -1}).max_abs_freq() == 2);
  CHECK_THROWS_AS(BasisIndex::haar(1, 3), std::invalid_argument);
  CHECK_THROWS_AS(BasisIndex::haar(-1, 1), std::invalid_argument);
  CHECK(basis::to_string(BasisIndex::fourier({2, -1})) == "F(2,-1)");

  const auto Z = basis::enumerate_truncation(BasisKind::Fourier, 2, 2, true);
  CHECK(Z.contains(BasisIndex::fourier({1, -2})));
  CHECK(!Z.contains(BasisIndex::fourier({3, 0})));
  CHECK(!Z.contains(BasisIndex::constant()));
}

}  // TEST_SUITE

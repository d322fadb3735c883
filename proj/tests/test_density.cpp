#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "advloss/density.hpp"
#include "advloss/errors.hpp"
#include "advloss/quadrature.hpp"

using namespace advloss;
using basis::BasisIndex;
using basis::BasisKind;
using basis::CoefficientVector;
using density::NonnegVerdict;
using density::SeriesDensity;

namespace {

BasisIndex F(int z) { return BasisIndex::fourier({z}); }

int hamming(const std::vector<int>& a, const std::vector<int>& b) {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) ++d;
  return d;
}

}  // namespace

TEST_SUITE("density") {

TEST_CASE("construction and evaluation") {
  const auto p0 = SeriesDensity::uniform(1);
  CHECK(p0(0.37) == 1.0);
  CHECK(p0(0.0) == 1.0);

  const SeriesDensity p(1, BasisKind::Fourier, {{F(1), 0.5}});
  CHECK(p(0.0) == doctest::Approx(1.0 + 0.5 * std::numbers::sqrt2)
                      .epsilon(1e-12));
  CHECK(p(0.5) == doctest::Approx(1.0 - 0.5 * std::numbers::sqrt2)
                      .epsilon(1e-12));

  const SeriesDensity h(1, BasisKind::Haar, {{BasisIndex::haar(0, 1), 0.3}});
  CHECK(h(0.25) == doctest::Approx(1.3));
  CHECK(h(0.75) == doctest::Approx(0.7));

  CHECK_THROWS_AS(
      SeriesDensity(1, BasisKind::Fourier, {{BasisIndex::constant(), 0.2}}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      SeriesDensity(2, BasisKind::Fourier, {{F(1), 0.2}}),
      std::invalid_argument);

  // linearity: two modes evaluate as the sum of single-mode terms
  const SeriesDensity two(1, BasisKind::Fourier, {{F(1), 0.2}, {F(-3), 0.1}});
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    const double x = u(gen);
    const double term_by_term = 1.0 +
                                0.2 * basis::eval_basis(F(1), x) +
                                0.1 * basis::eval_basis(F(-3), x);
    CHECK(two(x) == doctest::Approx(term_by_term).epsilon(1e-15));
  }
}

TEST_CASE("non-negativity certificates") {
  CHECK(density::nonneg_check(SeriesDensity::uniform(1)).verdict ==
        NonnegVerdict::Analytic);

  const SeriesDensity ok(1, BasisKind::Fourier, {{F(1), 0.5}});
  CHECK(density::nonneg_check(ok).verdict == NonnegVerdict::Analytic);

  // closed-form minimum 1 - 0.8 sqrt(2) < 0
  const SeriesDensity bad(1, BasisKind::Fourier, {{F(1), 0.8}});
  const auto cert = density::nonneg_check(bad, 512);
  CHECK(cert.verdict == NonnegVerdict::NotNonnegative);
  CHECK(cert.grid_min ==
        doctest::Approx(1.0 - 0.8 * std::numbers::sqrt2).epsilon(1e-3));
  CHECK_THROWS_AS(density::certify_nonnegative(bad), condition_error);

  // mass > 1 but strictly positive: certified through the Lipschitz slack
  const SeriesDensity grid_case(
      1, BasisKind::Fourier, {{F(1), 0.6}, {F(2), 0.25}});
  CHECK(grid_case.coefficient_mass() > 1.0);
  const auto c2 = density::nonneg_check(grid_case, 512);
  CHECK(c2.verdict == NonnegVerdict::Certified);
  CHECK(c2.grid_min - c2.slack >= 0.0);
  // the same density on a too-coarse grid cannot be certified
  CHECK(density::nonneg_check(grid_case, 4).verdict == NonnegVerdict::Unknown);

  const auto validated = density::certify_nonnegative(grid_case);
  CHECK(validated.validated_nonnegative());
  CHECK(!grid_case.validated_nonnegative());

  // haar: dyadic grids are exact, others cannot certify
  const SeriesDensity haar(1, BasisKind::Haar,
                           {{BasisIndex::haar(0, 1), 0.8},
                            {BasisIndex::haar(1, 1), 0.5}});
  CHECK(haar.coefficient_mass() > 1.0);
  const auto hc = density::nonneg_check(haar, 512);
  CHECK(hc.verdict == NonnegVerdict::Certified);
  CHECK(hc.slack == 0.0);
  CHECK(hc.grid_min == doctest::Approx(0.2));
  CHECK(density::nonneg_check(haar, 500).verdict == NonnegVerdict::Unknown);
  const SeriesDensity haar_bad(1, BasisKind::Haar,
                               {{BasisIndex::haar(0, 1), 1.2}});
  CHECK(density::nonneg_check(haar_bad, 512).verdict ==
        NonnegVerdict::NotNonnegative);
}

TEST_CASE("varshamov-gilbert packing") {
  CHECK_THROWS_AS(density::varshamov_gilbert(7), std::invalid_argument);
  for (int m : {8, 16, 24, 32}) {
    const auto T = density::varshamov_gilbert(m, 123);
    CHECK(T.size() >= static_cast<std::size_t>(std::ceil(std::exp2(m / 8.0))));
    for (std::size_t i = 0; i < T.size(); ++i) {
      REQUIRE(T[i].size() == static_cast<std::size_t>(m));
      for (int s : T[i]) CHECK((s == 1 || s == -1));
      for (std::size_t j = i + 1; j < T.size(); ++j)
        CHECK(hamming(T[i], T[j]) >= (m + 7) / 8);
    }
    CHECK(density::varshamov_gilbert(m, 123) == T);  // seeded determinism
    CHECK(density::varshamov_gilbert(m, 124) != T);
  }
}

TEST_CASE("packing densities of the lower-bound proof") {
  // |Z| = 2 is below the varshamov-gilbert threshold
  const auto tiny =
      basis::enumerate_truncation(BasisKind::Fourier, 1, 1, true);
  const loss::EllipseClass G{2.0, 0.05, basis::WeightRule::sobolev(1.0)};
  CHECK_THROWS_AS(density::packing_densities(tiny, G), std::invalid_argument);

  // |Z| = 8 (d = 2, zeta = 1) at the amplitude boundary
  const auto Z = basis::enumerate_truncation(BasisKind::Fourier, 1, 2, true);
  REQUIRE(Z.size() == 8);
  double sum_sup = 0.0, sup_b = 0.0;
  for (const auto& z : Z.indices) {
    sum_sup += basis::sup_norm(z);
    sup_b = std::max(sup_b, G.weights(z));
  }
  const double B_Z = std::sqrt(8.0) * sup_b;
  const double LG_boundary = B_Z / (2.0 * sum_sup);
  const loss::EllipseClass G_at{2.0, LG_boundary,
                                basis::WeightRule::sobolev(1.0)};

  const auto family = density::packing_densities(Z, G_at,
                                                 density::SetSizeConvention::MainText,
                                                 99);
  CHECK(family.members.size() >= 2);
  CHECK(family.amplitude == doctest::Approx(LG_boundary / B_Z));
  for (std::size_t i = 0; i < family.signs.size(); ++i)
    for (std::size_t j = i + 1; j < family.signs.size(); ++j)
      CHECK(hamming(family.signs[i], family.signs[j]) >= 1);

  std::mt19937 gen(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& member : family.members) {
    CHECK(member.validated_nonnegative());
    // the proof's floor: p_tau >= 0.5 everywhere
    double x[2];
    for (int rep = 0; rep < 2000; ++rep) {
      x[0] = u(gen);
      x[1] = u(gen);
      CHECK(member(std::span<const double>(x, 2)) >= 0.5 - 1e-12);
    }
    // membership in H_{q,b}(L_G), with the closed-form norm
    const auto mem = loss::ellipse_membership(member.coefficients(), G_at);
    CHECK(mem.is_member);
    double bq = 0.0;
    for (const auto& z : Z.indices) bq += std::pow(G.weights(z), 2.0);
    CHECK(mem.norm ==
          doctest::Approx(family.amplitude * std::sqrt(bq)).epsilon(1e-12));
  }

  // violated density condition names the inequality
  const loss::EllipseClass G_big{2.0, 10.0, basis::WeightRule::sobolev(1.0)};
  CHECK_THROWS_WITH_AS(
      density::packing_densities(Z, G_big),
      doctest::Contains("2 (L_G / B_Z) sum_z ||phi_z||_inf <= 1"),
      condition_error);
}

TEST_CASE("kl divergence quadrature oracle") {
  const auto p0 = SeriesDensity::uniform(1);
  CHECK(density::kl_divergence(p0, p0) == doctest::Approx(0.0).epsilon(1e-12));

  const auto p = density::certify_nonnegative(
      SeriesDensity(1, BasisKind::Fourier, {{F(1), 0.35}, {F(-2), 0.2}}));
  CHECK(density::kl_divergence(p, p) == doctest::Approx(0.0).epsilon(1e-10));

  // the proof's chain: KL(p, p0) <= 2 ||p - p0||_2^2 for p >= 1/2
  const auto q = density::certify_nonnegative(
      SeriesDensity(1, BasisKind::Fourier, {{F(1), 0.25}}));
  const double kl = density::kl_divergence(q, p0);
  const double l2 = density::l2_distance(q, p0);
  CHECK(kl >= 0.0);
  CHECK(kl <= 2.0 * l2 * l2 + 1e-6);

  const SeriesDensity negative(1, BasisKind::Fourier, {{F(1), 0.8}});
  CHECK_THROWS_AS(density::kl_divergence(p0, negative), std::domain_error);
}

TEST_CASE("l2 distance: parseval against quadrature") {
  const auto p0 = SeriesDensity::uniform(1);
  CHECK(density::l2_distance(p0, p0) == 0.0);
  const SeriesDensity p(1, BasisKind::Fourier, {{F(1), 0.5}});
  CHECK(density::l2_distance(p, p0) == doctest::Approx(0.5).epsilon(1e-15));

  const SeriesDensity h(1, BasisKind::Haar, {{BasisIndex::haar(0, 1), 0.3}});
  CHECK_THROWS_AS(density::l2_distance(p, h), std::invalid_argument);

  std::mt19937 gen(43);
  std::uniform_real_distribution<double> mag(-0.2, 0.2);
  std::uniform_int_distribution<int> pick(1, 4);
  for (int rep = 0; rep < 10; ++rep) {
    CoefficientVector ca, cb;
    for (int k = 0; k < 3; ++k) {
      ca[F(pick(gen))] = mag(gen);
      cb[F(-pick(gen))] = mag(gen);
    }
    const SeriesDensity a(1, BasisKind::Fourier, ca);
    const SeriesDensity b(1, BasisKind::Fourier, cb);
    const double quad_l2 = std::sqrt(quad::tensor_integral(
        1, 512, [&](std::span<const double> x) {
          const double diff = a(x) - b(x);
          return diff * diff;
        }));
    CHECK(density::l2_distance(a, b) ==
          doctest::Approx(quad_l2).epsilon(1e-8));
  }
}

TEST_CASE("unit mass under quadrature") {
  std::mt19937 gen(59);
  std::uniform_real_distribution<double> mag(-0.1, 0.1);
  std::uniform_int_distribution<int> pick(-4, 4);
  for (int rep = 0; rep < 5; ++rep) {
    CoefficientVector c1;
    for (int k = 0; k < 5; ++k) {
      const int z = pick(gen);
      if (z != 0) c1[F(z)] = mag(gen);
    }
    const SeriesDensity p1(1, BasisKind::Fourier, c1);
    CHECK(density::integral(p1) == doctest::Approx(1.0).epsilon(1e-8));

    CoefficientVector c2;
    c2[BasisIndex::fourier({pick(gen) | 1, pick(gen)})] = mag(gen);
    c2[BasisIndex::fourier({0, pick(gen) | 1})] = mag(gen);
    const SeriesDensity p2(2, BasisKind::Fourier, c2);
    CHECK(density::integral(p2) == doctest::Approx(1.0).epsilon(1e-8));
  }

  // positive-part mass of a dipping density exceeds 1's complement
  const SeriesDensity dip(1, BasisKind::Fourier, {{F(1), 0.8}});
  const double pos = density::positive_part_mass(dip);
  CHECK(pos > 1.0);  // clipping removes negative mass, so the rest exceeds 1
  CHECK(density::integral(dip) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("coefficient differences") {
  const SeriesDensity a(1, BasisKind::Fourier, {{F(1), 0.5}, {F(2), 0.1}});
  const SeriesDensity b(1, BasisKind::Fourier, {{F(1), 0.2}, {F(-3), 0.4}});
  const auto delta = density::coefficient_difference(a, b);
  CHECK(delta.at(F(1)) == doctest::Approx(0.3));
  CHECK(delta.at(F(2)) == doctest::Approx(0.1));
  CHECK(delta.at(F(-3)) == doctest::Approx(-0.4));
  CHECK(density::coefficient_difference(a, a).empty());
}

}  // TEST_SUITE

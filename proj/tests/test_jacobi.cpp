/*
 * subshift-spectra: Jacobi operator tests: transfer matrices, truncations,
 * Floquet bands and trend diagnostics.
 *
 * SPDX-License-Identifier: MIT
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "subshift/jacobi.hpp"

using namespace subshift;

namespace {

const Alphabet kAB = Alphabet::from_chars("ab");

Word W(const char* text) { return Word::parse(text, kAB); }

ToeplitzCoding period_doubling() { return ToeplitzCoding(kAB, {}, {}, {0, 1}, {2, 2}); }

}  // namespace

TEST_CASE("transfer matrix") {
  const auto J = JacobiCoefficients::free_laplacian();
  const PointedBiWord omega = PointedBiWord::periodic(Word({0}));
  const Mat2 m0 = transfer_matrix(J, 0.0, omega);
  CHECK(m0.a == doctest::Approx(0.0));
  CHECK(m0.b == doctest::Approx(-1.0));
  CHECK(m0.c == doctest::Approx(1.0));
  CHECK(m0.d == doctest::Approx(0.0));
  const Mat2 m2 = transfer_matrix(J, 2.0, omega);
  CHECK(m2.trace() == doctest::Approx(2.0));
  // det = 1 for scaled off-diagonals too.
  const auto Jc = JacobiCoefficients(LocallyConstantScalar::constant(0.7), LocallyConstantScalar::constant(0.0), 1);
  for (double E : {-3.0, 0.0, 1.5, 7.7})
    CHECK(transfer_matrix(Jc, E, omega).det() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("transfer determinant is exactly one across random models") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> fdist(0.2, 2.0);
  std::uniform_real_distribution<double> gdist(-1.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const auto J = JacobiCoefficients::per_letter({fdist(rng), fdist(rng)}, {gdist(rng), gdist(rng)});
    const PointedBiWord omega = PointedBiWord::periodic(W("abbab"));
    for (double E : {-2.0, 0.1, 3.0}) {
      const auto A = jacobi_cocycle(J, E);
      for (index_t pos = -3; pos <= 3; ++pos)
        CHECK(std::abs(A.value(omega, pos).det() - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("truncated spectra") {
  const PointedBiWord omega = PointedBiWord::periodic(Word({0}));
  SUBCASE("single site") {
    const auto J = JacobiCoefficients(LocallyConstantScalar::constant(1.0), LocallyConstantScalar::constant(0.5), 1);
    const auto eigen = truncated_spectrum(J, omega, 1);
    REQUIRE(eigen.size() == 1);
    CHECK(eigen[0] == doctest::Approx(0.5).epsilon(1e-9));
  }
  SUBCASE("two sites") {
    const auto J = JacobiCoefficients::free_laplacian();
    const auto eigen = truncated_spectrum(J, omega, 2);
    REQUIRE(eigen.size() == 2);
    CHECK(eigen[0] == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(eigen[1] == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("free operator at L = 100 matches the closed form") {
    const auto J = JacobiCoefficients::free_laplacian();
    const auto eigen = truncated_spectrum(J, omega, 100);
    REQUIRE(eigen.size() == 100);
    for (int k = 1; k <= 100; ++k)
      CHECK(std::abs(eigen[static_cast<std::size_t>(k - 1)] - 2.0 * std::cos(M_PI * (101 - k) / 101.0)) <= 1e-8);
  }
  SUBCASE("eigenvalues lie within the energy bound and interlace") {
    const auto J = JacobiCoefficients::per_letter({1.0, 0.5}, {0.25, -0.5});
    ToeplitzCoding pd = period_doubling();
    const auto omega_pd = leading_words(pd)[0].second;
    const double R = energy_bound(J);
    const auto small = truncated_spectrum(J, omega_pd, 40);
    const auto large = truncated_spectrum(J, omega_pd, 41);
    for (double x : small) CHECK(std::abs(x) <= R + 1e-9);
    for (std::size_t i = 0; i < small.size(); ++i) {
      CHECK(large[i] <= small[i] + 1e-9);
      CHECK(small[i] <= large[i + 1] + 1e-9);
    }
  }
}

TEST_CASE("energy bound") {
  CHECK(energy_bound(JacobiCoefficients::free_laplacian()) == doctest::Approx(2.0));
  CHECK(energy_bound(JacobiCoefficients::per_letter({1.0, 0.5}, {0.0, 0.0})) == doctest::Approx(2.0));
  CHECK(energy_bound(JacobiCoefficients::per_letter({0.25, 0.25}, {0.0, 0.25})) == doctest::Approx(0.75));
}

TEST_CASE("band sets") {
  const BandSet b = BandSet::from_intervals({{2.0, 3.0}, {0.0, 1.0}});
  CHECK(b.measure() == doctest::Approx(2.0));
  CHECK(b.band_count() == 2);
  CHECK(BandSet().measure() == 0.0);
  CHECK(BandSet::from_intervals({{-2.0, 2.0}}).measure() == doctest::Approx(4.0));
  CHECK(b.contains(0.5));
  CHECK(!b.contains(1.5));
  CHECK(b.distance(1.5) == doctest::Approx(0.5));
  // Touching intervals merge.
  CHECK(BandSet::from_intervals({{0.0, 1.0}, {1.0, 2.0}}).band_count() == 1);
}

TEST_CASE("periodic bands") {
  SUBCASE("free operator: single band [-2, 2]") {
    const auto J = JacobiCoefficients::free_laplacian();
    const BandSet bands = periodic_bands(J, Word({0}));
    REQUIRE(bands.band_count() == 1);
    CHECK(std::abs(bands.measure() - 4.0) <= 1e-8);
    CHECK(std::abs(bands.intervals()[0].lo + 2.0) <= 1e-9);
    CHECK(std::abs(bands.intervals()[0].hi - 2.0) <= 1e-9);
  }
  SUBCASE("constant off-diagonal c scales the band") {
    for (double c : {0.5, 0.25, 1.5}) {
      const auto J = JacobiCoefficients(LocallyConstantScalar::constant(c), LocallyConstantScalar::constant(0.0), 1);
      const BandSet bands = periodic_bands(J, Word({0}));
      CHECK(std::abs(bands.measure() - 4.0 * c) <= 1e-8);
    }
  }
  SUBCASE("periodization of a longer constant word changes nothing") {
    const auto J = JacobiCoefficients::free_laplacian();
    for (index_t len : {2, 3, 8}) {
      const BandSet bands = periodic_bands(J, Word(std::vector<Letter>(static_cast<std::size_t>(len), 0)));
      CHECK(std::abs(bands.measure() - 4.0) <= 1e-8);
    }
  }
  SUBCASE("period-2 model with distinct letters") {
    // f = (1, 1/2), g = 0, period "ab": discriminant ((E^2 - f1^2 - f2^2) / (f1 f2)).
    const auto J = JacobiCoefficients::per_letter({1.0, 0.5}, {0.0, 0.0});
    const BandSet bands = periodic_bands(J, W("ab"));
    // |t| <= 2 iff E^2 in [1.25 - 1, 1.25 + 1] -> |E| in [0.5, 1.5].
    REQUIRE(bands.band_count() == 2);
    CHECK(bands.intervals()[0].lo == doctest::Approx(-1.5).epsilon(1e-9));
    CHECK(bands.intervals()[0].hi == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(bands.intervals()[1].lo == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(bands.measure() == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("band count never exceeds the period") {
    ToeplitzCoding pd = period_doubling();
    const auto J = JacobiCoefficients::per_letter({1.0, 0.5}, {0.0, 0.0});
    for (const auto& ap : toeplitz_approximants(pd, 2, 6)) {
      const BandSet bands = periodic_bands(J, ap.period);
      CHECK(bands.band_count() <= static_cast<int>(ap.period.size()));
      CHECK(bands.band_count() > 0);
    }
  }
}

TEST_CASE("truncated eigenvalues versus the periodic bands") {
  // Two independent approximation routes. The distance from truncation
  // eigenvalues to the band set is recorded, not asserted tightly: Dirichlet
  // sections carry a handful of boundary states inside spectral gaps.
  ToeplitzCoding pd = period_doubling();
  const auto J = JacobiCoefficients::per_letter({1.0, 0.5}, {0.0, 0.0});
  const auto omega = leading_words(pd)[0].second;
  for (int level : {3, 5, 7}) {
    const Word q = toeplitz_approximants(pd, level, level)[0].period;
    const BandSet bands = periodic_bands(J, q);
    const auto eigen = truncated_spectrum(J, omega, 4 * q.size());
    double worst = 0.0;
    for (double x : eigen) worst = std::max(worst, bands.distance(x));
    MESSAGE("level ", level, ": eigenvalue-to-band distance ", worst);
    CHECK(worst <= 0.5);  // sanity only
    // The bands themselves are densely filled by truncation eigenvalues.
    const double coverage = hausdorff_distance(eigen, bands);
    MESSAGE("level ", level, ": hausdorff ", coverage);
    CHECK(coverage <= 0.5);
    // The typical eigenvalue sits inside a band; the outliers are boundary
    // states in gaps.
    std::vector<double> dists;
    for (double x : eigen) dists.push_back(bands.distance(x));
    std::sort(dists.begin(), dists.end());
    CHECK(dists[dists.size() / 2] <= 0.05);
  }
}

TEST_CASE("cantor profile") {
  SUBCASE("periodic negative control keeps constant measure") {
    const auto J = JacobiCoefficients::free_laplacian();
    std::vector<PeriodicApproximant> ladder;
    for (int k = 3; k <= 6; ++k)
      ladder.push_back({k, Word(std::vector<Letter>(std::size_t(1) << k, 0)), "constant"});
    const CantorProfile profile = cantor_profile(J, ladder);
    CHECK(profile.verdict == "constant-measure");
    for (const auto& row : profile.rows) CHECK(std::abs(row.measure - 4.0) <= 1e-8);
  }
  SUBCASE("anisotropic period-doubling model shrinks") {
    ToeplitzCoding pd = period_doubling();
    const auto J = JacobiCoefficients::per_letter({1.0, 0.5}, {0.0, 0.0});
    const CantorProfile profile = cantor_profile(J, toeplitz_approximants(pd, 3, 6));
    CHECK(profile.verdict == "consistent-with-measure-zero-cantor");
    for (std::size_t i = 1; i < profile.rows.size(); ++i)
      CHECK(profile.rows[i].measure < profile.rows[i - 1].measure);
  }
}

TEST_CASE("hausdorff distance") {
  const BandSet bands = BandSet::from_intervals({{0.0, 1.0}, {2.0, 3.0}});
  CHECK(hausdorff_distance({0.0, 0.5, 1.0, 2.0, 2.5, 3.0}, bands) == doctest::Approx(0.25));
  CHECK(hausdorff_distance({0.0, 1.0, 2.0, 3.0, 4.0}, bands) == doctest::Approx(1.0));
  CHECK(hausdorff_distance({0.5, 2.5}, bands) == doctest::Approx(0.5));
}

TEST_CASE("eigenvalue absence probe") {
  ToeplitzCoding pd = period_doubling();
  const auto J = JacobiCoefficients::per_letter({1.0, 0.5}, {0.0, 0.0});
  const auto [letter, omega] = leading_words(pd)[1];
  const auto witnesses = gamma_prime_witnesses(omega, three_block_witnesses(pd, letter, 4, 2));
  REQUIRE(!witnesses.empty());
  const auto report = eigenvalue_absence_probe(J, omega, witnesses, {0.0, 0.9, 2.5});
  CHECK(report.all_bounded_below);
  for (const auto& row : report.rows) {
    CHECK(row.exact_bound);
    CHECK(row.min_over_directions >= -std::log(2.0) - 1e-12);
  }
}

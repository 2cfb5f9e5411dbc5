/*
 * subshift-spectra: cocycle evaluation and Lyapunov machinery tests.
 *
 * SPDX-License-Identifier: MIT
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "subshift/cocycle.hpp"
#include "subshift/jacobi.hpp"
#include "subshift/toeplitz.hpp"

using namespace subshift;

namespace {

const Alphabet kAB = Alphabet::from_chars("ab");

Word W(const char* text) { return Word::parse(text, kAB); }

ToeplitzCoding period_doubling() { return ToeplitzCoding(kAB, {}, {}, {0, 1}, {2, 2}); }

Mat2 random_unimodular(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> entry(-scale, scale);
  std::uniform_real_distribution<double> diag(0.5, 1.5);
  const double a = diag(rng) * (rng() % 2 ? 1.0 : -1.0);
  const double b = entry(rng);
  const double c = entry(rng);
  return {a, b, c, (1.0 + b * c) / a};
}

LocallyConstantCocycle random_letter_cocycle(std::mt19937_64& rng, int alphabet = 2) {
  std::vector<Mat2> mats;
  for (int i = 0; i < alphabet; ++i) mats.push_back(random_unimodular(rng));
  return LocallyConstantCocycle::from_letter_matrices(mats);
}

PointedBiWord random_periodic_word(std::mt19937_64& rng, index_t period_len, int alphabet = 2) {
  std::uniform_int_distribution<Letter> letter(0, alphabet - 1);
  std::vector<Letter> letters(static_cast<std::size_t>(period_len));
  for (auto& l : letters) l = letter(rng);
  return PointedBiWord::periodic(Word(std::move(letters)));
}

}  // namespace

TEST_CASE("evaluate basics") {
  const auto diag = LocallyConstantCocycle::from_letter_matrices({Mat2::diag(2.0, 0.5), Mat2::diag(2.0, 0.5)});
  const PointedBiWord omega = PointedBiWord::periodic(W("ab"));
  const Mat2 id = evaluate(diag, 0, omega);
  CHECK(id.a == 1.0);
  CHECK(id.d == 1.0);
  const Mat2 p5 = evaluate(diag, 5, omega);
  CHECK(p5.a == doctest::Approx(32.0));
  CHECK(p5.d == doctest::Approx(1.0 / 32.0));
  const Mat2 m3 = evaluate(diag, -3, omega);
  CHECK(m3.a == doctest::Approx(1.0 / 8.0));
}

TEST_CASE("cocycle composition law") {
  std::mt19937_64 rng(123);
  for (int t = 0; t < 100; ++t) {
    const auto A = random_letter_cocycle(rng);
    const auto omega = random_periodic_word(rng, 3 + t % 7);
    std::uniform_int_distribution<index_t> dist(-12, 12);
    const index_t n = dist(rng), m = dist(rng);
    const Mat2 lhs = evaluate(A, n + m, omega);
    const Mat2 rhs = evaluate(A, n, omega.shifted(m)) * evaluate(A, m, omega);
    CHECK((lhs - rhs).max_abs() <= 1e-8 * std::max(1.0, rhs.max_abs()));
  }
}

TEST_CASE("determinant stays one under renormalized accumulation") {
  std::mt19937_64 rng(77);
  const auto A = random_letter_cocycle(rng);
  const auto omega = random_periodic_word(rng, 11);
  for (index_t n : {100, 4096, 65536, -65536}) {
    const ScaledMat2 prod = evaluate_scaled(A, n, omega);
    CHECK(std::abs(prod.log_abs_det()) <= 1e-6);
  }
}

TEST_CASE("norm of a unimodular product is at least one") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 50; ++t) {
    const auto A = random_letter_cocycle(rng);
    const auto omega = random_periodic_word(rng, 5);
    CHECK(evaluate_scaled(A, 40 + t, omega).log_norm() >= -1e-12);
  }
}

TEST_CASE("lyapunov estimates") {
  const PointedBiWord omega = PointedBiWord::periodic(W("a"));
  SUBCASE("constant diagonal") {
    const auto A = LocallyConstantCocycle::from_letter_matrices({Mat2::diag(2.0, 0.5)});
    for (index_t n : {1, 10, 1000}) CHECK(lyapunov_estimate(A, omega, n) == doctest::Approx(std::log(2.0)));
  }
  SUBCASE("rotations have zero exponent") {
    const auto A = LocallyConstantCocycle::from_letter_matrices({Mat2::rotation(1.2345)});
    CHECK(lyapunov_estimate(A, omega, 4096) <= 1e-9);
  }
  SUBCASE("free Jacobi transfer at E = 3") {
    const auto J = JacobiCoefficients::free_laplacian();
    const auto A = jacobi_cocycle(J, 3.0);
    const PointedBiWord w = PointedBiWord::periodic(Word({0}));
    const double expected = std::log((3.0 + std::sqrt(5.0)) / 2.0);
    CHECK(lyapunov_estimate(A, w, 1 << 14) == doctest::Approx(expected).epsilon(1e-3));
  }
}

TEST_CASE("lyapunov profile matches single-shot estimates") {
  std::mt19937_64 rng(55);
  const auto A = random_letter_cocycle(rng);
  const auto omega = random_periodic_word(rng, 7);
  const std::vector<index_t> ns = {16, 64, 256};
  const auto profile = lyapunov_profile(A, omega, ns);
  for (std::size_t i = 0; i < ns.size(); ++i)
    CHECK(profile[i] == doctest::Approx(lyapunov_estimate(A, omega, ns[i])).epsilon(1e-12));
}

TEST_CASE("uniformity spread") {
  SUBCASE("constant cocycle has zero spread") {
    const auto A = LocallyConstantCocycle::from_letter_matrices({Mat2::diag(3.0, 1.0 / 3.0), Mat2::diag(3.0, 1.0 / 3.0)});
    std::vector<PointedBiWord> samples;
    for (int i = 0; i < 10; ++i) samples.push_back(PointedBiWord::periodic(W("ab")).shifted(i));
    const auto result = uniformity_spread(A, samples, 256);
    CHECK(result.spread <= 1e-12);
  }
  SUBCASE("period-doubling Jacobi spread shrinks as n doubles") {
    ToeplitzCoding pd = period_doubling();
    std::vector<PointedBiWord> lead;
    for (const auto& [l, w] : leading_words(pd)) lead.push_back(w);
    const auto samples = make_spread_samples(lead, 8, 24, 100000, 3);
    const auto J = JacobiCoefficients::per_letter({1.0, 0.5}, {0.0, 0.0});
    const auto A = jacobi_cocycle(J, 4.0);  // outside the spectrum: hyperbolic
    const auto profile = uniformity_spread_profile(A, samples, {256, 1024, 4096});
    CHECK(profile[0].spread < 1e-2);
    for (std::size_t i = 1; i < profile.size(); ++i)
      CHECK(profile[i].spread <= profile[i - 1].spread * 1.1);
  }
}

TEST_CASE("contracting directions") {
  const PointedBiWord omega = PointedBiWord::periodic(W("a"));
  SUBCASE("diagonal cocycle contracts the second axis forward") {
    const auto A = LocallyConstantCocycle::from_letter_matrices({Mat2::diag(2.0, 0.5)});
    const Vec2 v = contracting_direction(A, omega, 20, TimeDirection::forward);
    CHECK(std::abs(v.y) == doctest::Approx(1.0));
    const Vec2 u = contracting_direction(A, omega, 20, TimeDirection::backward);
    CHECK(std::abs(u.x) == doctest::Approx(1.0));
  }
  SUBCASE("rotation cocycle is flagged ill-conditioned") {
    const auto A = LocallyConstantCocycle::from_letter_matrices({Mat2::rotation(0.7)});
    CHECK_THROWS_AS(contracting_direction(A, omega, 64, TimeDirection::forward), IllConditionedError);
  }
  SUBCASE("estimates stabilize and the two directions stay apart at a hyperbolic energy") {
    ToeplitzCoding pd = period_doubling();
    const auto lead = leading_words(pd);
    const auto J = JacobiCoefficients::per_letter({1.0, 0.5}, {0.0, 0.0});
    const auto A = jacobi_cocycle(J, 3.0);
    for (const auto& [letter, w] : lead) {
      const Vec2 v1 = contracting_direction(A, w, 1 << 9, TimeDirection::forward);
      const Vec2 v2 = contracting_direction(A, w, 1 << 10, TimeDirection::forward);
      CHECK(line_angle(v1, v2) <= 1e-6);
      const Vec2 back = contracting_direction(A, w, 1 << 10, TimeDirection::backward);
      CHECK(line_angle(v2, back) >= 0.05);
    }
  }
}

TEST_CASE("norm reflection") {
  std::mt19937_64 rng(999);
  for (int t = 0; t < 40; ++t) {
    const auto A = random_letter_cocycle(rng);
    const auto omega = random_periodic_word(rng, 4 + t % 5);
    CHECK(norm_reflection_check(A, omega, 10));
    CHECK(norm_reflection_check(A, omega, 0));
    CHECK(norm_reflection_check(A, omega, 501));
  }
}

TEST_CASE("chop-off bound") {
  std::mt19937_64 rng(1001);
  for (int t = 0; t < 40; ++t) {
    const auto A = random_letter_cocycle(rng);
    const auto omega = random_periodic_word(rng, 6);
    for (index_t N : {1, 3, 10}) {
      const double cN = static_cast<double>(N) * A.max_log_norm();
      for (index_t n : {20, 100, 1000}) {
        const double lhs = evaluate_scaled(A, n, omega).log_norm();
        const double rhs = evaluate_scaled(A, n - N, omega.shifted(N)).log_norm();
        CHECK(std::abs(lhs - rhs) <= cN + 1e-8);
      }
    }
  }
}

TEST_CASE("submultiplicativity of log norms") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 60; ++t) {
    const auto A = random_letter_cocycle(rng);
    const auto omega = random_periodic_word(rng, 5);
    std::uniform_int_distribution<index_t> dist(1, 200);
    const index_t n = dist(rng), m = dist(rng);
    const double whole = evaluate_scaled(A, n + m, omega).log_norm();
    const double part1 = evaluate_scaled(A, m, omega).log_norm();
    const double part2 = evaluate_scaled(A, n, omega.shifted(m)).log_norm();
    CHECK(whole <= part1 + part2 + 1e-9);
  }
}

TEST_CASE("forward and backward estimates agree along leading words") {
  ToeplitzCoding pd = period_doubling();
  const auto lead = leading_words(pd);
  const auto J = JacobiCoefficients::per_letter({1.0, 0.5}, {0.0, 0.0});
  const auto A = jacobi_cocycle(J, 2.5);
  for (const auto& [letter, omega] : lead) {
    const double fwd = lyapunov_estimate(A, omega, 1 << 12);
    const double bwd = lyapunov_estimate(A, omega, -(1 << 12));
    CHECK(std::abs(fwd - bwd) <= 0.02);
  }
}

TEST_CASE("gordon bound") {
  SUBCASE("rotation cocycle: all three norms equal the input") {
    const auto A = LocallyConstantCocycle::from_letter_matrices({Mat2::rotation(0.9), Mat2::rotation(0.9)});
    const PointedBiWord omega = PointedBiWord::periodic(W("ab"));
    const GordonResult g = gordon_bound_check(A, omega, W("ab"), {1.0, 0.0});
    CHECK(g.pattern_ok);
    CHECK(g.margin_ok);
    CHECK(g.exact_bound_holds);
    CHECK(g.log_norm_mid == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("Toeplitz witnesses with the Jacobi cocycle") {
    ToeplitzCoding pd = period_doubling();
    const auto J = JacobiCoefficients::per_letter({1.0, 0.5}, {0.0, 0.0});
    for (const auto& [letter, omega] : leading_words(pd)) {
      const auto ladder = three_block_witnesses(pd, letter, 5, 2);
      for (const Word& w : ladder) {
        REQUIRE(w.size() >= 3);
        for (double E : {0.3, 1.1, 2.7}) {
          const auto A = jacobi_cocycle(J, E);
          const GordonResult g = gordon_bound_check(A, omega, w, {0.6, 0.8}, SquareSide::pair_left);
          CHECK(g.pattern_ok);
          CHECK(g.margin_ok);
          CHECK(g.exact_bound_holds);
        }
      }
    }
  }
  SUBCASE("broken pattern is reported") {
    std::mt19937_64 rng(4);
    const auto A = random_letter_cocycle(rng);
    const PointedBiWord omega = PointedBiWord::periodic(W("aab"));
    const GordonResult g = gordon_bound_check(A, omega, W("ab"), {1.0, 0.0});
    CHECK(!g.pattern_ok);
  }
}

TEST_CASE("cocycle table lookups reject unassigned windows") {
  const auto A = LocallyConstantCocycle::from_table(0, 2, {{W("a"), Mat2::identity()}});
  CHECK_THROWS_AS(A.at_window(W("b").span()), std::invalid_argument);
  CHECK(A.at_window(W("a").span()).a == 1.0);
}

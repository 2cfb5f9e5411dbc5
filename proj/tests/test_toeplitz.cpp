/*
 * subshift-spectra: simple Toeplitz subshift tests.
 *
 * SPDX-License-Identifier: MIT
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "subshift/lsc.hpp"
#include "subshift/toeplitz.hpp"

using namespace subshift;

namespace {

const Alphabet kAB = Alphabet::from_chars("ab");
const Alphabet kABC = Alphabet::from_chars("abc");

Word W(const char* text) { return Word::parse(text, kAB); }

/// The period-doubling coding ((a,b),(2,2)) repeating.
ToeplitzCoding period_doubling() { return ToeplitzCoding(kAB, {}, {}, {0, 1}, {2, 2}); }

/// Brute-force oracle: build the block by the recursion directly.
Word block_oracle(const ToeplitzCoding& c, index_t k) {
  Word block;
  for (index_t j = 0; j <= k; ++j) {
    Word next;
    for (index_t copy = 0; copy < c.period_at(j); ++copy) {
      if (copy > 0) next = next + Word({c.letter_at(j)});
      next = next + block;
    }
    block = next;
  }
  return block;
}

ToeplitzCoding random_coding(std::mt19937_64& rng, int max_alphabet = 4, index_t max_period = 5) {
  std::uniform_int_distribution<int> alpha_dist(2, max_alphabet);
  const int alphabet_size = alpha_dist(rng);
  std::uniform_int_distribution<Letter> letter_dist(0, alphabet_size - 1);
  std::uniform_int_distribution<index_t> period_dist(2, max_period);
  std::uniform_int_distribution<int> len_dist(0, 2);
  std::vector<Letter> prefix(static_cast<std::size_t>(len_dist(rng)));
  std::vector<index_t> prefix_periods(prefix.size());
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    prefix[i] = letter_dist(rng);
    prefix_periods[i] = period_dist(rng);
  }
  // Cycle over at least two distinct letters, no equal consecutive slots.
  // A two-letter alphabet only supports even-length alternating cycles.
  std::uniform_int_distribution<int> cycle_dist(2, 3);
  const int cycle_len = alphabet_size == 2 ? 2 : cycle_dist(rng);
  std::vector<Letter> cycle(static_cast<std::size_t>(cycle_len));
  std::vector<index_t> cycle_periods(cycle.size());
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    do {
      cycle[i] = letter_dist(rng);
    } while ((i > 0 && cycle[i] == cycle[i - 1]) || (i + 1 == cycle.size() && cycle[i] == cycle[0]));
    cycle_periods[i] = period_dist(rng);
  }
  if (std::set<Letter>(cycle.begin(), cycle.end()).size() < 2) cycle[0] = (cycle[1] + 1) % alphabet_size;
  Alphabet alpha = Alphabet::from_chars(std::string("abcd").substr(0, static_cast<std::size_t>(alphabet_size)));
  return ToeplitzCoding(std::move(alpha), std::move(prefix), std::move(prefix_periods), std::move(cycle),
                        std::move(cycle_periods));
}

}  // namespace

TEST_CASE("block recursion examples") {
  ToeplitzCoding pd = period_doubling();
  CHECK(toeplitz_block(pd, 0) == W("a"));
  CHECK(toeplitz_block(pd, 2) == W("abaaaba"));
  ToeplitzCoding c23(kAB, {0, 1}, {2, 3}, {0, 1}, {2, 2});
  CHECK(toeplitz_block(c23, 1) == W("ababa"));
  ToeplitzCoding c32(kAB, {0, 1}, {3, 2}, {0, 1}, {2, 2});
  CHECK(limit_word(c32).prefix(5) == W("aabaa"));
}

TEST_CASE("block length formula") {
  ToeplitzCoding c(kAB, {0, 1, 0}, {2, 3, 2}, {1, 0}, {2, 2});
  CHECK(toeplitz_block_length(c, 2) == 11);
  CHECK(toeplitz_block_length(c, -1) == 0);
  ToeplitzCoding pd = period_doubling();
  CHECK(toeplitz_block_length(pd, 9) == 1023);
  for (index_t k = -1; k <= 9; ++k)
    CHECK(toeplitz_block(pd, k).size() == toeplitz_block_length(pd, k));
}

TEST_CASE("normalize_coding merges equal consecutive letters") {
  // (a,a,b) with periods (2,3,2) -> (a,b) with (6,2)
  ToeplitzCoding c(kAB, {0, 0, 1}, {2, 3, 2}, {0, 1}, {2, 2});
  ToeplitzCoding n = normalize_coding(c);
  REQUIRE(n.letters.size() >= 2);
  CHECK(n.letters[0] == 0);
  CHECK(n.periods[0] == 6);
  CHECK(n.letters[1] == 1);
  CHECK(n.periods[1] == 2);
  // Blocks are unchanged: compare via the recursion oracle at equal lengths.
  for (index_t k = 0; k <= 6; ++k) {
    const Word w = block_oracle(n, k);
    const Word orig = limit_word(c).prefix(w.size());
    CHECK(w == orig);
  }

  ToeplitzCoding c2(kAB, {0, 0, 0, 1}, {2, 2, 2, 2}, {0, 1}, {2, 2});
  ToeplitzCoding n2 = normalize_coding(c2);
  CHECK(n2.letters[0] == 0);
  CHECK(n2.periods[0] == 8);
  CHECK(n2.letters[1] == 1);
  CHECK(n2.periods[1] == 2);

  // Already normalized coding is unchanged.
  ToeplitzCoding pd = period_doubling();
  ToeplitzCoding npd = normalize_coding(pd);
  for (index_t k = 0; k < 8; ++k) {
    CHECK(npd.letter_at(k) == pd.letter_at(k));
    CHECK(npd.period_at(k) == pd.period_at(k));
  }
}

TEST_CASE("normalize_coding handles merges across the cycle boundary") {
  // Cycle (a,b,a): consecutive copies merge the wrap-around a's.
  ToeplitzCoding c(kAB, {}, {}, {0, 1, 0}, {2, 2, 2});
  ToeplitzCoding n = normalize_coding(c);
  // The normalized stream must have no equal consecutive letters.
  for (index_t k = 0; k < 20; ++k) CHECK(n.letter_at(k) != n.letter_at(k + 1));
  // And generate the same limit word.
  const Word a = limit_word(c).prefix(2000);
  const Word b = limit_word(n).prefix(2000);
  CHECK(a == b);
}

TEST_CASE("limit word agrees with blocks") {
  ToeplitzCoding pd = period_doubling();
  const Stream p = limit_word(pd);
  CHECK(p.prefix(7) == W("abaaaba"));
  CHECK(p.at(0) == kAB.letter("a"));
  for (index_t k = 1; k <= 10; ++k) {
    const Word block = toeplitz_block(pd, k);
    CHECK(p.prefix(block.size()) == block);
  }
}

TEST_CASE("leading word indexing") {
  ToeplitzCoding pd = period_doubling();
  const auto lead = leading_words(pd);
  REQUIRE(lead.size() == 2);
  for (const auto& [letter, omega] : lead) {
    CHECK(omega.at(-1) == letter);
    CHECK(omega.at(0) == pd.letter_at(0));
  }
  // For a^(j) = b: window(-3..2) assembled from limit_word and reflect.
  const auto& omega_b = lead[1].second;
  CHECK(lead[1].first == kAB.letter("b"));
  CHECK(omega_b.window(-3, 2) == W("bababa"));
  // Left of the marker letter the word reads the reflected limit word.
  const Stream p = limit_word(pd);
  for (index_t i = 0; i < 50; ++i) CHECK(omega_b.at(-2 - i) == p.at(i));
}

TEST_CASE("blocks are palindromic nested prefixes and suffixes") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 10; ++t) {
    ToeplitzCoding c = random_coding(rng);
    for (index_t k = 0; k <= 5; ++k) {
      const Word block = toeplitz_block(c, k);
      CHECK(block.is_palindrome());
      CHECK(block.size() == toeplitz_block_length(c, k));
      const Word next = toeplitz_block(c, k + 1);
      CHECK(block.is_prefix_of(next));
      CHECK(block.is_suffix_of(next));
    }
  }
}

TEST_CASE("hole filling") {
  ToeplitzCoding pd = period_doubling();
  SUBCASE("one level leaves holes on the offset residue class") {
    const HoleFilling h = hole_filling(pd, {0}, 1, 3);
    for (index_t pos = -3; pos <= 3; ++pos) {
      if (((pos % 2) + 2) % 2 == 0) CHECK(!h.at(pos).has_value());
      else CHECK(h.at(pos) == kAB.letter("a"));
    }
    CHECK(h.render(kAB) == "a?a?a?a");
  }
  SUBCASE("filled positions never change as levels increase") {
    const HoleFilling h2 = hole_filling(pd, {0, 0}, 2, 20);
    const HoleFilling h4 = hole_filling(pd, {0, 0, 0, 0}, 4, 20);
    for (index_t pos = -20; pos <= 20; ++pos)
      if (h2.at(pos).has_value()) CHECK(h2.at(pos) == h4.at(pos));
  }
  SUBCASE("zero offsets reproduce the limit word shifted by one") {
    const HoleFilling h = hole_filling(pd, {}, 12, 40);
    const Stream p = limit_word(pd);
    for (index_t pos = 1; pos <= 40; ++pos) {
      REQUIRE(h.at(pos).has_value());
      CHECK(*h.at(pos) == p.at(pos - 1));
      CHECK(*h.at(-pos) == p.at(pos - 1));
    }
    CHECK(!h.at(0).has_value());
  }
  SUBCASE("residual hole filled with an eventual letter yields only factors of the limit word") {
    const HoleFilling h = hole_filling(pd, {}, 12, 30, true);
    REQUIRE(h.residual_filled.has_value());
    std::vector<Letter> letters;
    for (const auto& cell : h.cells) letters.push_back(*cell);
    const Word filled(std::move(letters));
    const auto limit_factors = factors_of_length(limit_word(pd), 6, 5000);
    for (const Word& u : factors_of_length(filled, 6, filled.size())) CHECK(limit_factors.count(u) == 1);
  }
}

TEST_CASE("occurrence of words around the origin (small scale)") {
  ToeplitzCoding pd = period_doubling();
  const auto lead = leading_words(pd);
  const Stream p = limit_word(pd);
  const index_t start = toeplitz_block_length(pd, pd.eventual_start());
  for (index_t L = start; L <= 40; ++L) {
    std::set<Word> covered;
    for (const auto& [letter, omega] : lead)
      for (index_t k = 0; k <= L; ++k) covered.insert(central_window(omega, k, L));
    for (const Word& u : factors_of_length(p, L, 4000)) CHECK(covered.count(u) == 1);
  }
}

TEST_CASE("three blocks around the origin") {
  ToeplitzCoding pd = period_doubling();
  for (const auto& [letter, omega] : leading_words(pd)) {
    for (const Word& w : three_block_witnesses(pd, letter, 5)) {
      const index_t L = w.size();
      CHECK(omega.window(-2 * L, -L - 1) == w);
      CHECK(omega.window(-L, -1) == w);
      CHECK(omega.window(0, L - 1) == w);
    }
  }
}

TEST_CASE("(PQ) constant one eighth for block prefixes") {
  ToeplitzCoding pd = period_doubling();
  const Stream p = limit_word(pd);
  for (index_t k = 0; k <= 4; ++k) {
    const Word v = toeplitz_block(pd, k);
    const index_t guard = toeplitz_block_length(pd, k) + 1;
    for (index_t L = 2 * guard; L <= 1 << 14; L *= 2) {
      const Word prefix = p.prefix(L);
      const index_t count = count_disjoint_occurrences(v, prefix);
      CHECK(8 * count * v.size() >= L);
    }
  }
}

TEST_CASE("subadditive averages along blocks") {
  ToeplitzCoding pd = period_doubling();
  const Stream p = limit_word(pd);
  const SubadditiveFunction F{"count_a", [](const Word& w) {
    double total = 0;
    for (Letter l : w) total += (l == 0) ? 1.0 : 0.0;
    return total;
  }};
  const double D = 1.0;  // max single-letter value
  const index_t L = 1 << 12;
  double fL = -1e300;
  for (const Word& x : factors_of_length(p, 64, L)) fL = std::max(fL, F.eval(x) / 64.0);
  for (index_t k = 2; k <= 5; ++k) {
    const Word block = toeplitz_block(pd, k);
    const double ratio = F.eval(block) / static_cast<double>(block.size());
    const double len = static_cast<double>(block.size());
    // Upper bound from the decomposition argument, at factor length 64.
    CHECK(fL <= ratio + 2.0 * D / len + 2.0 * D * len / 64.0 + 1e-12);
  }
}

TEST_CASE("decompose") {
  ToeplitzCoding pd = period_doubling();
  SUBCASE("the level-2 block decomposes at level 1") {
    const auto parts = decompose(W("abaaaba"), pd, 1);
    REQUIRE(parts.size() == 3);
    CHECK(parts[0].kind == PartKind::block);
    CHECK(parts[1].kind == PartKind::separator);
    CHECK(parts[1].separator == kAB.letter("a"));
    CHECK(parts[2].kind == PartKind::block);
  }
  SUBCASE("a single block parses as one part") {
    const auto parts = decompose(W("aba"), pd, 1);
    REQUIRE(parts.size() == 1);
    CHECK(parts[0].kind == PartKind::block);
    CHECK(parts[0].length == 3);
  }
  SUBCASE("non-factors are rejected") {
    CHECK_THROWS_AS(decompose(W("bb"), pd, 0), NotAFactorError);
  }
  SUBCASE("genuinely ambiguous inputs raise") {
    // "aa" parses both as block+separator and separator+block at level 0.
    CHECK_THROWS_AS(decompose(W("aa"), pd, 0), AmbiguousDecompositionError);
  }
  SUBCASE("long factors of the limit word decompose uniquely") {
    const Stream p = limit_word(pd);
    for (index_t start : {0, 5, 11, 23}) {
      const Word w = p.slice(start, 40);
      const auto parts = decompose(w, pd, 2);
      index_t covered = 0;
      for (const auto& part : parts) covered += part.length;
      CHECK(covered == w.size());
    }
  }
}

TEST_CASE("boshernitzan indicator") {
  ToeplitzCoding grig(kABC, {}, {}, {0, 1, 2}, {2, 2, 2});
  const auto report = boshernitzan_indicator(grig, 2, 50);
  CHECK(report.applicable);
  CHECK(report.qualifying.size() == 51);  // every t qualifies
  CHECK(report.density == doctest::Approx(1.0));

  // Letters eventually x,y with x-runs growing: small windows thin out.
  ToeplitzCoding thin(kAB, {0, 1, 0, 0, 1, 0, 0, 0, 1}, {2, 2, 2, 2, 2, 2, 2, 2, 2}, {0, 1}, {2, 2});
  const auto r2 = boshernitzan_indicator(thin, 1, 8);
  CHECK(r2.applicable);
  CHECK(r2.qualifying.size() < 9);

  // Vacuous when the window spans the horizon.
  const auto r3 = boshernitzan_indicator(grig, 60, 50);
  CHECK(r3.qualifying.size() == 51);

  // Non power-of-two periods: not applicable.
  ToeplitzCoding c3(kAB, {}, {}, {0, 1}, {3, 2});
  CHECK(!boshernitzan_indicator(c3, 2, 10).applicable);
}

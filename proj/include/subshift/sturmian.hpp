/*
 * subshift-spectra: Sturmian subshifts from continued-fraction data.
 *
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <limits>
#include <utility>

#include "subshift/word.hpp"

namespace subshift {

/// Continued fraction [a_1, a_2, ...] of an irrational rotation number in
/// (0,1), as a finite prefix plus a repeating tail cycle. All quotients >= 1.
struct SturmianCF {
  std::vector<index_t> prefix;  // a_1, a_2, ...
  std::vector<index_t> cycle;   // repeated after the prefix

  SturmianCF(std::vector<index_t> prefix_, std::vector<index_t> cycle_)
      : prefix(std::move(prefix_)), cycle(std::move(cycle_)) {
    if (cycle.empty()) throw std::invalid_argument("continued fraction needs a repeating tail");
    for (index_t a : prefix)
      if (a < 1) throw std::invalid_argument("partial quotients must be >= 1");
    for (index_t a : cycle)
      if (a < 1) throw std::invalid_argument("partial quotients must be >= 1");
  }

  /// The golden rotation number [1,1,1,...].
  static SturmianCF golden() { return SturmianCF({}, {1}); }

  index_t quotient(index_t n) const {  // 1-indexed: a_n
    if (n < 1) throw std::out_of_range("partial quotients are indexed from 1");
    const index_t i = n - 1;
    if (i < static_cast<index_t>(prefix.size())) return prefix[static_cast<std::size_t>(i)];
    return cycle[static_cast<std::size_t>((i - static_cast<index_t>(prefix.size())) %
                                          static_cast<index_t>(cycle.size()))];
  }
};

/// |s_n|: the continuant recursion |s_n| = a_n |s_{n-1}| + |s_{n-2}| for n>=2,
/// with |s_{-1}| = |s_0| = 1 and |s_1| = a_1.
inline index_t sturmian_length(const SturmianCF& cf, index_t n) {
  if (n < -1) throw std::invalid_argument("s_n is defined for n >= -1");
  if (n <= 0) return 1;
  index_t prev2 = 1;                 // |s_{-1}|
  index_t prev1 = 1;                 // |s_0|
  index_t len = cf.quotient(1);      // |s_1|
  if (n == 1) return len;
  prev2 = prev1;
  prev1 = len;
  for (index_t m = 2; m <= n; ++m) {
    const index_t a = cf.quotient(m);
    if (prev1 > (std::numeric_limits<index_t>::max() - prev2) / a)
      throw std::overflow_error("Sturmian word length exceeds 64-bit range");
    len = a * prev1 + prev2;
    prev2 = prev1;
    prev1 = len;
  }
  return len;
}

/// s_n over the alphabet {0,1}: s_{-1}=1, s_0=0, s_1=s_0^{a_1-1} s_{-1},
/// s_n = s_{n-1}^{a_n} s_{n-2}.
inline Word sturmian_word(const SturmianCF& cf, index_t n) {
  if (n < -1) throw std::invalid_argument("s_n is defined for n >= -1");
  if (sturmian_length(cf, n) > (index_t(1) << 24))
    throw std::length_error("Sturmian word exceeds the materialization cap; use sturmian_stream");
  if (n == -1) return Word({1});
  if (n == 0) return Word({0});
  Word prev2({1});  // s_{-1}
  Word prev1({0});  // s_0
  {
    std::vector<Letter> s1(static_cast<std::size_t>(cf.quotient(1) - 1), 0);
    s1.push_back(1);
    Word w(std::move(s1));
    prev2 = std::move(prev1);
    prev1 = std::move(w);
  }
  for (index_t m = 2; m <= n; ++m) {
    const index_t a = cf.quotient(m);
    std::vector<Letter> next;
    next.reserve(static_cast<std::size_t>(a * prev1.size() + prev2.size()));
    for (index_t copy = 0; copy < a; ++copy)
      next.insert(next.end(), prev1.begin(), prev1.end());
    next.insert(next.end(), prev2.begin(), prev2.end());
    prev2 = std::move(prev1);
    prev1 = Word(std::move(next));
  }
  return prev1;
}

/// Letter i of the right limit c_alpha = lim s_n, resolved by descending the
/// recursion without materializing long words.
inline Letter sturmian_limit_letter(const SturmianCF& cf, index_t i) {
  if (i < 0) throw std::out_of_range("stream positions start at 0");
  index_t n = 1;
  while (sturmian_length(cf, n) <= i) ++n;
  while (n >= 2) {
    const index_t a = cf.quotient(n);
    const index_t sub = sturmian_length(cf, n - 1);
    if (i < a * sub) {
      i %= sub;
      n -= 1;
    } else {
      i -= a * sub;
      n -= 2;
    }
  }
  if (n <= 0) return n == 0 ? 0 : 1;
  // n == 1: s_1 = 0^{a_1-1} 1
  return i < cf.quotient(1) - 1 ? 0 : 1;
}

/// The one-sided limit word c_alpha as a stream.
inline Stream sturmian_stream(const SturmianCF& cf) {
  return Stream([cf](index_t i) { return sturmian_limit_letter(cf, i); });
}

/// First L letters of c_alpha; stable across all s_n with |s_n| >= L.
inline Word right_limit_prefix(const SturmianCF& cf, index_t L) {
  return sturmian_stream(cf).prefix(L);
}

/// Splits s_n = pi_n * tail with tail "10" for even n and "01" for odd n, and
/// asserts that pi_n is a palindrome. Defined for n >= 2.
inline std::pair<Word, Word> palindrome_split(const SturmianCF& cf, index_t n) {
  if (n < 2) throw std::invalid_argument("palindrome split is defined for n >= 2");
  const Word s = sturmian_word(cf, n);
  const Word head = s.slice(0, s.size() - 2);
  const Word tail = s.slice(s.size() - 2, 2);
  const Word expected = (n % 2 == 0) ? Word({1, 0}) : Word({0, 1});
  if (tail != expected) throw std::logic_error("Sturmian word does not end in the expected two letters");
  if (!head.is_palindrome()) throw std::logic_error("Sturmian palindrome prefix check failed");
  return {head, tail};
}

/// True iff s_n s_{n+1} and s_{n+1} s_n agree after deleting the last two
/// letters of each. Holds for n >= 3.
inline bool star_identity_check(const SturmianCF& cf, index_t n) {
  if (n < 3) throw std::invalid_argument("star identity is checked for n >= 3");
  const Word u = sturmian_word(cf, n);
  const Word v = sturmian_word(cf, n + 1);
  const index_t total = u.size() + v.size() - 2;
  auto uv = [&](index_t i) { return i < u.size() ? u[i] : v[i - u.size()]; };
  auto vu = [&](index_t i) { return i < v.size() ? v[i] : u[i - v.size()]; };
  for (index_t i = 0; i < total; ++i)
    if (uv(i) != vu(i)) return false;
  return true;
}

/// The two leading words of the subshift, both of the form c^R v | c with a
/// two-letter v at positions (-2, -1):
///   even_word has v = "10" and reads ... s_{2n} | s_{2n} s_{2n} ... (n >= 2),
///   odd_word  has v = "01" and reads ... s_{2n+1} | s_{2n+1} s_{2n+1} ... (n >= 1).
struct SturmianLeading {
  PointedBiWord even_word;
  PointedBiWord odd_word;
};

inline SturmianLeading sturmian_leading_words(const SturmianCF& cf) {
  const Stream c = sturmian_stream(cf);
  return {PointedBiWord::reflected_with_core(c, Word({1, 0})),
          PointedBiWord::reflected_with_core(c, Word({0, 1}))};
}

/// gamma'-candidate ladder: s_{2n} (parity 0) or s_{2n+1} (parity 1) for n up
/// to max_n. Candidates are verified against the word by the lsc checkers.
inline std::vector<Word> sturmian_gamma_ladder(const SturmianCF& cf, int parity, index_t max_n) {
  std::vector<Word> out;
  const index_t first = parity == 0 ? 2 : 1;
  for (index_t n = first; n <= max_n; ++n) {
    const index_t idx = 2 * n + (parity == 0 ? 0 : 1);
    if (sturmian_length(cf, idx) > (index_t(1) << 24)) break;
    out.push_back(sturmian_word(cf, idx));
  }
  return out;
}

/// Periodic approximant ladder for Sturmian models: period s_n.
inline std::vector<Word> sturmian_approximants(const SturmianCF& cf, index_t n_lo, index_t n_hi) {
  std::vector<Word> out;
  for (index_t n = n_lo; n <= n_hi; ++n) out.push_back(sturmian_word(cf, n));
  return out;
}

}  // namespace subshift

/*
 * subshift-spectra: finite-scale checkers for the leading sequence condition:
 * central-window coverage, disjoint-occurrence densities, repetition witnesses
 * and subadditive averages.
 *
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>

#include "subshift/word.hpp"

namespace subshift {

/// F with F(xy) <= F(x) + F(y) on factors. Subadditivity is not enforced; see
/// validate_subadditivity for a spot check.
struct SubadditiveFunction {
  std::string name;
  std::function<double(const Word&)> eval;
};

/// Soft validation: checks F(xy) <= F(x) + F(y) + tol on random splits of
/// random subwords of `sample`. Returns the number of violations.
inline int validate_subadditivity(const SubadditiveFunction& F, const Word& sample, int trials,
                                  std::uint64_t seed, double tol = 1e-9) {
  std::mt19937_64 rng(seed);
  int violations = 0;
  if (sample.size() < 2) return 0;
  for (int t = 0; t < trials; ++t) {
    std::uniform_int_distribution<index_t> len_dist(2, sample.size());
    const index_t len = len_dist(rng);
    std::uniform_int_distribution<index_t> pos_dist(0, sample.size() - len);
    const index_t pos = pos_dist(rng);
    std::uniform_int_distribution<index_t> cut_dist(1, len - 1);
    const index_t cut = cut_dist(rng);
    const Word xy = sample.slice(pos, len);
    const Word x = sample.slice(pos, cut);
    const Word y = sample.slice(pos + cut, len - cut);
    if (F.eval(xy) > F.eval(x) + F.eval(y) + tol) ++violations;
  }
  return violations;
}

// ---------------------------------------------------------------------------
// Condition (alpha): central-window coverage

struct AlphaReport {
  index_t n = 0;
  index_t horizon = 0;
  bool holds_at_scale = false;
  index_t factor_count = 0;
  index_t covered_count = 0;       // distinct central windows over all leading words
  std::vector<Word> missing;       // factors not covered (empty iff holds)
};

/// Checks that every length-n factor of the stream (enumerated up to
/// `horizon`) appears as a central window omega^(j)(-k+1 .. -k+n), 0 <= k <= n,
/// of one of the leading words.
inline AlphaReport check_alpha(const std::vector<PointedBiWord>& leading, const Stream& factor_source,
                               index_t n, index_t horizon) {
  if (n > horizon) throw std::invalid_argument("check_alpha needs n <= horizon");
  AlphaReport report;
  report.n = n;
  report.horizon = horizon;
  std::set<Word> covered;
  for (const auto& omega : leading)
    for (index_t k = 0; k <= n; ++k) covered.insert(central_window(omega, k, n));
  const std::set<Word> factors = factors_of_length(factor_source, n, horizon);
  report.factor_count = static_cast<index_t>(factors.size());
  report.covered_count = static_cast<index_t>(covered.size());
  for (const Word& u : factors)
    if (!covered.count(u)) report.missing.push_back(u);
  report.holds_at_scale = report.missing.empty();
  return report;
}

// ---------------------------------------------------------------------------
// Condition (PQ): disjoint-occurrence density of prefixes

/// Disjoint-occurrence density of the prefix v in p(0..L-1), scaled by |v|.
inline double pq_density(const Stream& p, const Word& v, index_t L) {
  if (v.empty()) throw std::invalid_argument("pq_density needs a non-empty prefix");
  if (L < v.size()) throw std::invalid_argument("pq_density needs L >= |v|");
  const Word prefix = p.prefix(L);
  if (!v.is_prefix_of(prefix)) throw std::invalid_argument("v is not a prefix of the stream");
  return static_cast<double>(count_disjoint_occurrences(v, prefix)) * static_cast<double>(v.size()) /
         static_cast<double>(L);
}

struct PqReport {
  Word prefix;
  std::vector<std::pair<index_t, double>> densities;  // (L, density * |v| / L)
  double constant = 0.125;
  double tolerance = 0.1;
  bool holds_at_scale = false;
};

/// Densities along a geometric ladder of L values. The liminf itself is not
/// computable; the verdict only fails when the density at the largest scale
/// drops below constant * (1 - tolerance).
inline PqReport pq_profile(const Stream& p, const Word& v, const std::vector<index_t>& ladder,
                           double constant = 0.125, double tolerance = 0.1) {
  PqReport report;
  report.prefix = v;
  report.constant = constant;
  report.tolerance = tolerance;
  for (index_t L : ladder)
    if (L >= v.size()) report.densities.emplace_back(L, pq_density(p, v, L));
  if (report.densities.empty()) throw std::invalid_argument("pq ladder contains no usable scale");
  report.holds_at_scale = report.densities.back().second >= constant * (1.0 - tolerance);
  return report;
}

// ---------------------------------------------------------------------------
// Condition (gamma'): aligned-repetition witnesses

/// Which side of the origin carries the doubled copy:
///   pair_left :  ... w w | w ...
///   pair_right:  ... w | w w ...
enum class SquareSide { pair_left, pair_right };

inline const char* to_string(SquareSide s) { return s == SquareSide::pair_left ? "ww|w" : "w|ww"; }

struct GammaWitness {
  Word w;
  SquareSide side;
};

inline bool matches_square(const PointedBiWord& omega, const Word& w, SquareSide side) {
  const index_t L = w.size();
  if (L == 0) return false;
  if (side == SquareSide::pair_right) {
    return omega.window(-L, -1) == w && omega.window(0, L - 1) == w && omega.window(L, 2 * L - 1) == w;
  }
  return omega.window(-2 * L, -L - 1) == w && omega.window(-L, -1) == w && omega.window(0, L - 1) == w;
}

/// Filters a caller-supplied candidate ladder down to the words w for which
/// the window equality ...ww|w or ...w|ww holds exactly. Generators know their
/// own ladders (Toeplitz: p^(k-1) a_k; Sturmian: s_n); this checker stays
/// generator-agnostic.
inline std::vector<GammaWitness> gamma_prime_witnesses(const PointedBiWord& omega,
                                                       const std::vector<Word>& candidates) {
  std::vector<GammaWitness> out;
  for (const Word& w : candidates) {
    if (matches_square(omega, w, SquareSide::pair_right)) out.push_back({w, SquareSide::pair_right});
    else if (matches_square(omega, w, SquareSide::pair_left)) out.push_back({w, SquareSide::pair_left});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subadditive averages

struct SubadditiveProfile {
  std::vector<std::pair<index_t, double>> prefix_ratios;  // (l, F(p(1..l)) / l)
  std::vector<std::pair<index_t, double>> factor_maxima;  // (n, F^(n))
  double fbar_estimate = 0.0;                              // min over sampled n of F^(n)
};

/// Prefix ratios F(p(1..l))/l together with the factor maxima
/// F^(n) = max { F(x)/n : |x| = n } over the factors enumerated up to
/// `factor_horizon`, and the resulting estimate of the limit
/// Fbar = inf_n F^(n).
inline SubadditiveProfile subadditive_profile(const SubadditiveFunction& F, const Stream& p,
                                              const std::vector<index_t>& prefix_lengths,
                                              const std::vector<index_t>& sample_ns,
                                              index_t factor_horizon) {
  SubadditiveProfile out;
  for (index_t l : prefix_lengths)
    out.prefix_ratios.emplace_back(l, F.eval(p.prefix(l)) / static_cast<double>(l));
  double best = std::numeric_limits<double>::infinity();
  for (index_t n : sample_ns) {
    double fn = -std::numeric_limits<double>::infinity();
    for (const Word& x : factors_of_length(p, n, factor_horizon))
      fn = std::max(fn, F.eval(x) / static_cast<double>(n));
    out.factor_maxima.emplace_back(n, fn);
    best = std::min(best, fn);
  }
  out.fbar_estimate = best;
  return out;
}

}  // namespace subshift

/*
 * subshift-spectra: simple Toeplitz subshifts: coding sequences, palindromic
 * blocks, leading words, hole filling and block decompositions.
 *
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <limits>
#include <optional>
#include <string>

#include "subshift/word.hpp"

namespace subshift {

struct NotAFactorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AmbiguousDecompositionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Blocks are materialized only while their length stays below this bound;
/// longer queries go through the position-indexed generator.
inline constexpr index_t kMaxMaterializedLength = index_t(1) << 24;

/// Coding sequences (a_k), (n_k) of a simple Toeplitz subshift, given as a
/// finite prefix plus a repeating tail cycle (so the eventual alphabet is
/// computable, not sampled). Periods must all be >= 2.
struct ToeplitzCoding {
  Alphabet alphabet;
  std::vector<Letter> letters;        // prefix of (a_k)
  std::vector<index_t> periods;       // prefix of (n_k)
  std::vector<Letter> letter_cycle;   // repeated after the prefix
  std::vector<index_t> period_cycle;

  ToeplitzCoding(Alphabet alpha, std::vector<Letter> letters_prefix, std::vector<index_t> periods_prefix,
                 std::vector<Letter> letters_tail, std::vector<index_t> periods_tail)
      : alphabet(std::move(alpha)),
        letters(std::move(letters_prefix)),
        periods(std::move(periods_prefix)),
        letter_cycle(std::move(letters_tail)),
        period_cycle(std::move(periods_tail)) {
    if (letters.size() != periods.size())
      throw std::invalid_argument("coding letter/period prefixes must have equal length");
    if (letter_cycle.size() != period_cycle.size())
      throw std::invalid_argument("coding letter/period cycles must have equal length");
    if (letters.empty() && letter_cycle.empty())
      throw std::invalid_argument("coding must not be empty");
    for (index_t n : periods)
      if (n < 2) throw std::invalid_argument("coding periods must be >= 2");
    for (index_t n : period_cycle)
      if (n < 2) throw std::invalid_argument("coding periods must be >= 2");
  }

  bool has_tail() const { return !letter_cycle.empty(); }

  Letter letter_at(index_t k) const {
    if (k < static_cast<index_t>(letters.size())) return letters[static_cast<std::size_t>(k)];
    if (!has_tail()) throw std::out_of_range("coding has no tail rule");
    const index_t j = (k - static_cast<index_t>(letters.size())) % static_cast<index_t>(letter_cycle.size());
    return letter_cycle[static_cast<std::size_t>(j)];
  }

  index_t period_at(index_t k) const {
    if (k < static_cast<index_t>(periods.size())) return periods[static_cast<std::size_t>(k)];
    if (!has_tail()) throw std::out_of_range("coding has no tail rule");
    const index_t j = (k - static_cast<index_t>(periods.size())) % static_cast<index_t>(period_cycle.size());
    return period_cycle[static_cast<std::size_t>(j)];
  }

  /// Letters occurring infinitely often, i.e. the distinct letters of the tail
  /// cycle, sorted by id.
  std::vector<Letter> eventual_alphabet() const {
    if (!has_tail()) throw std::logic_error("eventual alphabet requires a tail rule");
    std::set<Letter> s(letter_cycle.begin(), letter_cycle.end());
    return std::vector<Letter>(s.begin(), s.end());
  }

  /// First index from which every a_k lies in the eventual alphabet.
  index_t eventual_start() const {
    const auto ev = eventual_alphabet();
    auto in_ev = [&](Letter l) { return std::binary_search(ev.begin(), ev.end(), l); };
    index_t k = static_cast<index_t>(letters.size());
    while (k > 0 && in_ev(letters[static_cast<std::size_t>(k - 1)])) --k;
    return k;
  }

  bool aperiodic_at_scale() const { return eventual_alphabet().size() >= 2; }
};

/// |p^(k)| = prod_{j<=k} n_j - 1, without materializing the block.
/// k = -1 names the empty word. Throws on 64-bit overflow.
inline index_t toeplitz_block_length(const ToeplitzCoding& c, index_t k) {
  if (k < -1) throw std::invalid_argument("block index must be >= -1");
  index_t prod = 1;
  for (index_t j = 0; j <= k; ++j) {
    const index_t n = c.period_at(j);
    if (prod > std::numeric_limits<index_t>::max() / n)
      throw std::overflow_error("block length exceeds 64-bit range");
    prod *= n;
  }
  return prod - 1;
}

/// The palindromic block p^(k): p^(-1) is empty and p^(k+1) consists of
/// n_{k+1} copies of p^(k) separated by single letters a_{k+1}.
inline Word toeplitz_block(const ToeplitzCoding& c, index_t k) {
  const index_t len = toeplitz_block_length(c, k);
  if (len > kMaxMaterializedLength)
    throw std::length_error("block exceeds the materialization cap; use limit_word");
  std::vector<Letter> block;
  block.reserve(static_cast<std::size_t>(len));
  for (index_t j = 0; j <= k; ++j) {
    const Letter sep = c.letter_at(j);
    const index_t n = c.period_at(j);
    std::vector<Letter> next;
    next.reserve(static_cast<std::size_t>((block.size() + 1) * static_cast<std::size_t>(n) - 1));
    for (index_t copy = 0; copy < n; ++copy) {
      if (copy > 0) next.push_back(sep);
      next.insert(next.end(), block.begin(), block.end());
    }
    block = std::move(next);
  }
  return Word(std::move(block));
}

/// Letter i of the one-sided limit word p^infinity, resolved by repeated
/// division by the periods (the numeric mirror of the hole filling).
inline Letter toeplitz_limit_letter(const ToeplitzCoding& c, index_t i) {
  if (i < 0) throw std::out_of_range("limit word positions start at 0");
  index_t k = 0;
  for (;;) {
    const index_t n = c.period_at(k);
    if ((i + 1) % n != 0) return c.letter_at(k);
    i = (i + 1) / n - 1;
    ++k;
  }
}

/// The one-sided infinite word p^infinity as a stream. Requires a tail rule.
inline Stream limit_word(const ToeplitzCoding& c) {
  if (!c.has_tail()) throw std::invalid_argument("limit word requires a coding tail rule");
  return Stream([c](index_t i) { return toeplitz_limit_letter(c, i); });
}

/// Merges equal consecutive letters of the coding (multiplying the periods) up
/// to prefix index `horizon`; the generated blocks are unchanged. The returned
/// coding has no equal consecutive letters anywhere, including across the tail
/// cycle.
inline ToeplitzCoding normalize_coding(const ToeplitzCoding& c, index_t horizon = 64) {
  // Merge runs of the raw (letter, period) sequence. With an eventually
  // periodic tail the merged sequence is again eventually periodic: expand
  // the raw sequence far enough that the tail pattern stabilizes, then read
  // off the merged cycle.
  if (!c.has_tail()) {
    std::vector<Letter> ls;
    std::vector<index_t> ps;
    for (std::size_t i = 0; i < c.letters.size(); ++i) {
      if (!ls.empty() && ls.back() == c.letters[i]) {
        ps.back() *= c.periods[i];
      } else {
        ls.push_back(c.letters[i]);
        ps.push_back(c.periods[i]);
      }
    }
    return ToeplitzCoding(c.alphabet, std::move(ls), std::move(ps), {}, {});
  }

  const index_t cycle_len = static_cast<index_t>(c.letter_cycle.size());
  std::set<Letter> distinct(c.letter_cycle.begin(), c.letter_cycle.end());
  if (distinct.size() == 1) {
    // All-equal tail: the merged tail degenerates (the subshift is periodic).
    // Keep one cycle slot with the squared period as a convention; callers
    // that need aperiodicity check eventual_alphabet() anyway.
    std::vector<Letter> ls;
    std::vector<index_t> ps;
    const index_t raw_len = static_cast<index_t>(c.letters.size());
    for (index_t k = 0; k < raw_len; ++k) {
      const Letter l = c.letter_at(k);
      if (!ls.empty() && ls.back() == l) ps.back() *= c.period_at(k);
      else { ls.push_back(l); ps.push_back(c.period_at(k)); }
    }
    const Letter tail_letter = c.letter_cycle.front();
    index_t tail_period = 1;
    for (index_t p : c.period_cycle) tail_period *= p;
    if (!ls.empty() && ls.back() == tail_letter) {
      // Fold the (infinite) equal tail into a single cycle slot.
      ls.pop_back();
      ps.pop_back();
    }
    return ToeplitzCoding(c.alphabet, std::move(ls), std::move(ps), {tail_letter},
                          {std::max<index_t>(2, tail_period)});
  }

  // Expand prefix + three cycles, merge runs, then detect the repeating run
  // pattern of the purely cyclic part.
  const index_t raw_prefix = static_cast<index_t>(c.letters.size());
  const index_t expand = raw_prefix + 3 * cycle_len + horizon;
  std::vector<Letter> ls;
  std::vector<index_t> ps;
  std::vector<index_t> run_start;  // raw index where each merged run begins
  for (index_t k = 0; k < expand; ++k) {
    const Letter l = c.letter_at(k);
    if (!ls.empty() && ls.back() == l) {
      ps.back() *= c.period_at(k);
    } else {
      ls.push_back(l);
      ps.push_back(c.period_at(k));
      run_start.push_back(k);
    }
  }
  // Runs that begin at raw index >= raw_prefix + cycle_len repeat with a
  // period of `runs_per_cycle` merged slots.
  std::size_t first_stable = 0;
  while (first_stable < run_start.size() && run_start[first_stable] < raw_prefix + cycle_len) ++first_stable;
  std::size_t runs_per_cycle = 0;
  for (std::size_t i = first_stable + 1; i < run_start.size(); ++i) {
    if ((run_start[i] - run_start[first_stable]) % cycle_len == 0) {
      runs_per_cycle = i - first_stable;
      break;
    }
  }
  if (runs_per_cycle == 0 || first_stable + runs_per_cycle >= ls.size())
    throw std::logic_error("failed to stabilize normalized coding cycle");
  std::vector<Letter> tail_ls(ls.begin() + first_stable, ls.begin() + first_stable + runs_per_cycle);
  std::vector<index_t> tail_ps(ps.begin() + first_stable, ps.begin() + first_stable + runs_per_cycle);
  ls.resize(first_stable);
  ps.resize(first_stable);
  return ToeplitzCoding(c.alphabet, std::move(ls), std::move(ps), std::move(tail_ls), std::move(tail_ps));
}

/// Leading word of the eventual letter a: (p^inf)^R a | p^inf, with a at
/// position -1 and p^inf from position 0 rightwards.
inline PointedBiWord toeplitz_leading_word(const ToeplitzCoding& c, Letter eventual_letter) {
  return PointedBiWord::reflected_with_core(limit_word(c), Word({eventual_letter}));
}

/// One leading word per eventual letter, in letter-id order.
inline std::vector<std::pair<Letter, PointedBiWord>> leading_words(const ToeplitzCoding& c) {
  if (!c.aperiodic_at_scale())
    throw std::invalid_argument("coding is periodic: eventual alphabet has fewer than two letters");
  std::vector<std::pair<Letter, PointedBiWord>> out;
  for (Letter a : c.eventual_alphabet()) out.emplace_back(a, toeplitz_leading_word(c, a));
  return out;
}

/// gamma'-candidate ladder for the leading word of `eventual_letter`: the
/// words w_i = p^(k_i - 1) a_{k_i} over the first `count` indices k_i with
/// a_{k_i} equal to the letter. Around the origin the leading word reads
/// ... w_i w_i | w_i.
inline std::vector<Word> three_block_witnesses(const ToeplitzCoding& c, Letter eventual_letter, int count,
                                               index_t min_index = 0) {
  std::vector<Word> out;
  for (index_t k = min_index; static_cast<int>(out.size()) < count; ++k) {
    if (k > 1000) break;  // codings repeat; this is never reached for valid input
    if (c.letter_at(k) != eventual_letter) continue;
    if (toeplitz_block_length(c, k - 1) + 1 > kMaxMaterializedLength) break;
    out.push_back(toeplitz_block(c, k - 1) + Word({eventual_letter}));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hole filling

/// Result of K nested periodic insertions on the window [-halfwidth, halfwidth].
/// Unfilled positions are reported as std::nullopt; `residual_filled` records
/// a position that was patched with an eventual letter, if any.
struct HoleFilling {
  index_t halfwidth = 0;
  std::vector<std::optional<Letter>> cells;  // index i <-> position i - halfwidth
  std::optional<index_t> residual_filled;
  std::optional<Letter> residual_letter;

  std::optional<Letter> at(index_t pos) const {
    return cells.at(static_cast<std::size_t>(pos + halfwidth));
  }

  std::string render(const Alphabet& alphabet) const {
    std::string out;
    for (const auto& cell : cells) out += cell ? alphabet.name(*cell) : "?";
    return out;
  }
};

/// K levels of the hole filling with offsets (r_k): level k fills every
/// position outside n_k Z + r_k with a_k and hands the residue class down to
/// level k+1. With `fill_residual`, a hole that survives all K levels inside
/// the window is patched with the smallest eventual letter.
inline HoleFilling hole_filling(const ToeplitzCoding& c, const std::vector<index_t>& offsets, index_t levels,
                                index_t halfwidth, bool fill_residual = false) {
  if (levels < 1) throw std::invalid_argument("hole filling needs at least one level");
  for (index_t k = 0; k < levels; ++k) {
    const index_t r = k < static_cast<index_t>(offsets.size()) ? offsets[static_cast<std::size_t>(k)] : 0;
    if (r < 0 || r >= c.period_at(k)) throw std::invalid_argument("offsets must satisfy 0 <= r_k < n_k");
  }
  auto offset_at = [&](index_t k) {
    return k < static_cast<index_t>(offsets.size()) ? offsets[static_cast<std::size_t>(k)] : index_t(0);
  };
  HoleFilling out;
  out.halfwidth = halfwidth;
  out.cells.resize(static_cast<std::size_t>(2 * halfwidth + 1));
  for (index_t pos = -halfwidth; pos <= halfwidth; ++pos) {
    index_t j = pos;
    std::optional<Letter> letter;
    for (index_t k = 0; k < levels; ++k) {
      const index_t n = c.period_at(k);
      const index_t r = offset_at(k);
      index_t rem = (j - r) % n;
      if (rem < 0) rem += n;
      if (rem != 0) {
        letter = c.letter_at(k);
        break;
      }
      j = (j - r) / n;
    }
    out.cells[static_cast<std::size_t>(pos + halfwidth)] = letter;
  }
  if (fill_residual) {
    for (index_t pos = -halfwidth; pos <= halfwidth; ++pos) {
      auto& cell = out.cells[static_cast<std::size_t>(pos + halfwidth)];
      if (!cell) {
        const Letter patch = c.eventual_alphabet().front();
        cell = patch;
        out.residual_filled = pos;
        out.residual_letter = patch;
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Block decomposition

enum class PartKind { block, separator, fragment };

struct DecompositionPart {
  index_t offset = 0;  // start position within the decomposed word
  index_t length = 0;
  PartKind kind = PartKind::fragment;
  Letter separator = -1;  // valid for separator parts
};

/// Parses w as ... p^(k) * p^(k) * ... with single-letter separators from
/// {a_j : j >= k+1}, plus boundary fragments. The grid alignment is scanned
/// exhaustively; if several alignments are consistent, the ones containing the
/// most complete blocks are preferred (anchoring on full blocks), and a
/// remaining tie is reported as ambiguous rather than silently resolved.
inline std::vector<DecompositionPart> decompose(const Word& w, const ToeplitzCoding& c, index_t k) {
  if (w.empty()) throw std::invalid_argument("cannot decompose the empty word");
  const index_t block_len = toeplitz_block_length(c, k);
  const index_t grid = block_len + 1;
  const Word block = toeplitz_block(c, k);

  // Letters that may appear as separators at this level.
  std::set<Letter> separators;
  for (index_t j = k + 1; j < k + 1 + static_cast<index_t>(c.letters.size() + c.letter_cycle.size()) + 1; ++j) {
    if (j < static_cast<index_t>(c.letters.size()) || c.has_tail()) separators.insert(c.letter_at(j));
    if (j >= static_cast<index_t>(c.letters.size()) && !c.has_tail()) break;
  }

  struct Candidate {
    index_t alignment;
    index_t complete_blocks;
    std::vector<DecompositionPart> parts;
  };
  std::vector<Candidate> valid;

  for (index_t align = 0; align < grid; ++align) {
    // Position i of w sits at grid phase (align + i) mod grid; phase grid-1 is
    // a separator slot, phases 0..grid-2 index into the block.
    bool ok = true;
    std::vector<DecompositionPart> parts;
    index_t complete = 0;
    index_t i = 0;
    while (i < w.size() && ok) {
      const index_t phase = (align + i) % grid;
      if (phase == grid - 1) {
        if (!separators.count(w[i])) {
          ok = false;
          break;
        }
        parts.push_back({i, 1, PartKind::separator, w[i]});
        ++i;
      } else {
        const index_t run = std::min(w.size() - i, grid - 1 - phase);
        for (index_t t = 0; t < run; ++t) {
          if (w[i + t] != block[phase + t]) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
        const bool full = (phase == 0 && run == block_len);
        parts.push_back({i, run, full ? PartKind::block : PartKind::fragment});
        if (full) ++complete;
        i += run;
      }
    }
    if (ok) valid.push_back({align, complete, std::move(parts)});
  }

  if (valid.empty()) throw NotAFactorError("word admits no level-" + std::to_string(k) + " decomposition");
  index_t best = 0;
  for (const auto& cand : valid) best = std::max(best, cand.complete_blocks);
  std::vector<const Candidate*> winners;
  for (const auto& cand : valid)
    if (cand.complete_blocks == best) winners.push_back(&cand);
  if (winners.size() > 1)
    throw AmbiguousDecompositionError("decomposition at level " + std::to_string(k) + " is ambiguous (" +
                                      std::to_string(winners.size()) + " alignments)");
  return winners.front()->parts;
}

// ---------------------------------------------------------------------------
// Boshernitzan indicator

/// Finite-scale probe of the Boshernitzan criterion for power-of-two periods:
/// counts the t <= t_max whose window {a_t .. a_{t+C}} already exhausts the
/// letters seen in {a_s : t <= s <= t_max}.
struct BoshernitzanReport {
  bool applicable = false;
  index_t horizon = 0;
  int window = 0;
  std::vector<index_t> qualifying;
  double density = 0.0;
};

inline BoshernitzanReport boshernitzan_indicator(const ToeplitzCoding& c, int window, index_t t_max) {
  BoshernitzanReport out;
  out.horizon = t_max;
  out.window = window;
  for (index_t k = 0; k <= t_max; ++k) {
    index_t n = c.period_at(k);
    while (n % 2 == 0) n /= 2;
    if (n != 1) return out;  // applicable stays false
  }
  out.applicable = true;
  // Tail letter sets, computed backwards.
  std::vector<std::set<Letter>> tail(static_cast<std::size_t>(t_max + 2));
  for (index_t t = t_max; t >= 0; --t) {
    tail[static_cast<std::size_t>(t)] = tail[static_cast<std::size_t>(t + 1)];
    tail[static_cast<std::size_t>(t)].insert(c.letter_at(t));
  }
  for (index_t t = 0; t <= t_max; ++t) {
    std::set<Letter> seen;
    for (index_t s = t; s <= std::min(t_max, t + window); ++s) seen.insert(c.letter_at(s));
    if (seen == tail[static_cast<std::size_t>(t)]) out.qualifying.push_back(t);
  }
  out.density = static_cast<double>(out.qualifying.size()) / static_cast<double>(t_max + 1);
  return out;
}

}  // namespace subshift

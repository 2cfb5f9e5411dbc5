/*
 * subshift-spectra: locally constant SL(2,R) cocycles over pointed words:
 * evaluation, Lyapunov estimates, uniformity spreads, contracting directions
 * and the three-repetition lower bound.
 *
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <cmath>
#include <limits>
#include <random>

#include "subshift/lsc.hpp"
#include "subshift/mat2.hpp"
#include "subshift/word.hpp"

namespace subshift {

struct IllConditionedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// SL(2,R)-valued function of a word that depends only on the letters in a
/// fixed window [lo, hi] relative to the current position. A symmetric radius
/// N corresponds to [-N, N]; the Jacobi transfer cocycle reads [1, 2]. Values
/// are stored in a dense table indexed by the packed window word.
class LocallyConstantCocycle {
 public:
  static LocallyConstantCocycle from_function(index_t lo, index_t hi, int alphabet_size,
                                              const std::function<Mat2(std::span<const Letter>)>& rule) {
    LocallyConstantCocycle out(lo, hi, alphabet_size);
    std::vector<Letter> window(static_cast<std::size_t>(out.window_length()));
    for (std::size_t code = 0; code < out.table_.size(); ++code) {
      std::size_t rest = code;
      for (std::size_t j = window.size(); j-- > 0;) {
        window[j] = static_cast<Letter>(rest % static_cast<std::size_t>(alphabet_size));
        rest /= static_cast<std::size_t>(alphabet_size);
      }
      out.table_[code] = rule(window);
      out.assigned_[code] = 1;
    }
    return out;
  }

  /// Radius-0 cocycle: one matrix per letter.
  static LocallyConstantCocycle from_letter_matrices(const std::vector<Mat2>& per_letter) {
    return from_function(0, 0, static_cast<int>(per_letter.size()),
                         [&](std::span<const Letter> w) { return per_letter[static_cast<std::size_t>(w[0])]; });
  }

  /// Sparse table over a symmetric radius; windows absent from the map are
  /// left unassigned and raise on lookup.
  static LocallyConstantCocycle from_table(int radius, int alphabet_size,
                                           const std::vector<std::pair<Word, Mat2>>& entries) {
    LocallyConstantCocycle out(-radius, radius, alphabet_size);
    for (const auto& [w, m] : entries) {
      if (w.size() != out.window_length()) throw std::invalid_argument("cocycle table window of wrong length");
      out.table_[out.pack(w.span())] = m;
      out.assigned_[out.pack(w.span())] = 1;
    }
    return out;
  }

  index_t window_lo() const { return lo_; }
  index_t window_hi() const { return hi_; }
  index_t window_length() const { return hi_ - lo_ + 1; }
  int alphabet_size() const { return alphabet_size_; }

  Mat2 at_window(std::span<const Letter> window) const {
    const std::size_t code = pack(window);
    if (!assigned_[code]) throw std::invalid_argument("cocycle window without an assigned matrix");
    return table_[code];
  }

  /// A(T^pos omega): the matrix read from the window around position pos.
  Mat2 value(const PointedBiWord& omega, index_t pos) const {
    const Word w = omega.window(pos + lo_, pos + hi_);
    return at_window(w.span());
  }

  /// Unimodularity check over the assigned table, |det - 1| <= tol.
  bool unimodular(double tol = 1e-9) const {
    for (std::size_t code = 0; code < table_.size(); ++code)
      if (assigned_[code] && std::abs(table_[code].det() - 1.0) > tol) return false;
    return true;
  }

  /// max over assigned windows of log ||A||; c(N) = N * max_log_norm bounds
  /// log ||A(N, omega)|| uniformly.
  double max_log_norm() const {
    double best = 0.0;
    for (std::size_t code = 0; code < table_.size(); ++code)
      if (assigned_[code]) best = std::max(best, std::log(table_[code].spectral_norm()));
    return best;
  }

  std::size_t pack(std::span<const Letter> window) const {
    std::size_t code = 0;
    for (Letter l : window) {
      if (l < 0 || l >= alphabet_size_) throw std::out_of_range("letter outside the cocycle alphabet");
      code = code * static_cast<std::size_t>(alphabet_size_) + static_cast<std::size_t>(l);
    }
    return code;
  }

 private:
  LocallyConstantCocycle(index_t lo, index_t hi, int alphabet_size)
      : lo_(lo), hi_(hi), alphabet_size_(alphabet_size) {
    if (hi < lo) throw std::invalid_argument("cocycle window must be non-empty");
    if (alphabet_size < 1) throw std::invalid_argument("cocycle alphabet must be non-empty");
    std::size_t size = 1;
    for (index_t i = lo; i <= hi; ++i) {
      if (size > (std::size_t(1) << 24)) throw std::length_error("cocycle window table too large");
      size *= static_cast<std::size_t>(alphabet_size);
    }
    table_.resize(size);
    assigned_.assign(size, 0);
  }

  index_t lo_, hi_;
  int alphabet_size_;
  std::vector<Mat2> table_;
  std::vector<char> assigned_;
};

namespace detail {

/// Letters omega(first..last) materialized once, with O(1) window access.
struct FetchedRange {
  index_t first = 0;
  std::vector<Letter> letters;

  explicit FetchedRange(const PointedBiWord& omega, index_t lo, index_t hi) : first(lo) {
    const Word w = omega.window(lo, hi);
    letters.assign(w.begin(), w.end());
  }

  std::span<const Letter> window(index_t lo, index_t hi) const {
    return std::span<const Letter>(letters).subspan(static_cast<std::size_t>(lo - first),
                                                    static_cast<std::size_t>(hi - lo + 1));
  }
};

template <typename Step>
void walk_cocycle(const LocallyConstantCocycle& A, index_t n, const PointedBiWord& omega, Step&& step) {
  if (n == 0) return;
  if (n > 0) {
    const FetchedRange range(omega, A.window_lo(), n - 1 + A.window_hi());
    for (index_t i = 0; i < n; ++i)
      step(A.at_window(range.window(i + A.window_lo(), i + A.window_hi())));
  } else {
    const FetchedRange range(omega, n + A.window_lo(), -1 + A.window_hi());
    for (index_t i = -1; i >= n; --i)
      step(A.at_window(range.window(i + A.window_lo(), i + A.window_hi())).inverse());
  }
}

}  // namespace detail

/// The cocycle product A(n, omega): A(T^{n-1} omega) ... A(omega) for n > 0,
/// the identity for n = 0, and A^{-1}(T^n omega) ... A^{-1}(T^{-1} omega) for
/// n < 0. Plain double arithmetic; use evaluate_scaled for long products.
inline Mat2 evaluate(const LocallyConstantCocycle& A, index_t n, const PointedBiWord& omega) {
  Mat2 out = Mat2::identity();
  detail::walk_cocycle(A, n, omega, [&](const Mat2& m) { out = m * out; });
  return out;
}

/// A(n, omega) with per-step renormalization; immune to overflow.
inline ScaledMat2 evaluate_scaled(const LocallyConstantCocycle& A, index_t n, const PointedBiWord& omega) {
  ScaledMat2 out = ScaledMat2::identity();
  detail::walk_cocycle(A, n, omega, [&](const Mat2& m) { out.apply_left(m); });
  return out;
}

/// A(n, omega) v in scaled form.
inline ScaledVec2 evaluate_applied(const LocallyConstantCocycle& A, index_t n, const PointedBiWord& omega,
                                   const Vec2& v) {
  ScaledVec2 out = ScaledVec2::from(v);
  detail::walk_cocycle(A, n, omega, [&](const Mat2& m) { out.apply_left(m); });
  return out;
}

/// log ||A(n, omega)|| / |n|, accumulated with per-step renormalization.
inline double lyapunov_estimate(const LocallyConstantCocycle& A, const PointedBiWord& omega, index_t n) {
  if (n == 0) throw std::invalid_argument("Lyapunov estimate needs n != 0");
  return evaluate_scaled(A, n, omega).log_norm() / static_cast<double>(std::abs(n));
}

/// Lyapunov estimates at several n in one forward pass. Checkpoints must be
/// positive and ascending.
inline std::vector<double> lyapunov_profile(const LocallyConstantCocycle& A, const PointedBiWord& omega,
                                            const std::vector<index_t>& checkpoints) {
  std::vector<double> out;
  out.reserve(checkpoints.size());
  ScaledMat2 acc = ScaledMat2::identity();
  index_t done = 0;
  for (index_t n : checkpoints) {
    if (n <= done) throw std::invalid_argument("checkpoints must be ascending and positive");
    detail::walk_cocycle(A, n - done, omega.shifted(done), [&](const Mat2& m) { acc.apply_left(m); });
    done = n;
    out.push_back(acc.log_norm() / static_cast<double>(n));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Uniformity diagnostics

struct SpreadResult {
  double min = 0.0;
  double max = 0.0;
  double spread = 0.0;
};

inline SpreadResult uniformity_spread(const LocallyConstantCocycle& A, const std::vector<PointedBiWord>& samples,
                                      index_t n) {
  if (samples.empty()) throw std::invalid_argument("uniformity spread needs samples");
  SpreadResult out;
  out.min = std::numeric_limits<double>::infinity();
  out.max = -std::numeric_limits<double>::infinity();
  for (const auto& omega : samples) {
    const double est = lyapunov_estimate(A, omega, n);
    out.min = std::min(out.min, est);
    out.max = std::max(out.max, est);
  }
  out.spread = out.max - out.min;
  return out;
}

/// Spreads at several n, one pass per sample.
inline std::vector<SpreadResult> uniformity_spread_profile(const LocallyConstantCocycle& A,
                                                           const std::vector<PointedBiWord>& samples,
                                                           const std::vector<index_t>& checkpoints) {
  if (samples.empty()) throw std::invalid_argument("uniformity spread needs samples");
  std::vector<SpreadResult> out(checkpoints.size());
  for (auto& r : out) {
    r.min = std::numeric_limits<double>::infinity();
    r.max = -std::numeric_limits<double>::infinity();
  }
  for (const auto& omega : samples) {
    const auto profile = lyapunov_profile(A, omega, checkpoints);
    for (std::size_t i = 0; i < profile.size(); ++i) {
      out[i].min = std::min(out[i].min, profile[i]);
      out[i].max = std::max(out[i].max, profile[i]);
    }
  }
  for (auto& r : out) r.spread = r.max - r.min;
  return out;
}

/// Sample set for spread scans: each leading word shifted along a logarithmic
/// ladder of origins, plus uniformly random shifts (seeded).
inline std::vector<PointedBiWord> make_spread_samples(const std::vector<PointedBiWord>& leading,
                                                      int ladder_shifts = 16, int random_shifts = 64,
                                                      index_t max_shift = 1000000, std::uint64_t seed = 1) {
  if (leading.empty()) throw std::invalid_argument("need at least one leading word");
  std::vector<PointedBiWord> out;
  index_t shift = 1;
  for (int i = 0; i < ladder_shifts; ++i) {
    const auto& base = leading[static_cast<std::size_t>(i) % leading.size()];
    out.push_back(base.shifted(i % 2 == 0 ? shift : -shift));
    if (i % 2 == 1) shift = std::min<index_t>(2 * shift, max_shift);
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<index_t> dist(-max_shift, max_shift);
  std::uniform_int_distribution<std::size_t> pick(0, leading.size() - 1);
  for (int i = 0; i < random_shifts; ++i) out.push_back(leading[pick(rng)].shifted(dist(rng)));
  return out;
}

enum class TimeDirection { forward, backward };

/// Finite-n estimate of the contracted direction: the right-singular vector of
/// A(+-n, omega) for the smaller singular value. Requires an appreciably
/// positive Lyapunov estimate at n.
inline Vec2 contracting_direction(const LocallyConstantCocycle& A, const PointedBiWord& omega, index_t n,
                                  TimeDirection dir, double threshold = 0.01) {
  if (n <= 0) throw std::invalid_argument("contracting_direction needs n >= 1");
  const index_t signed_n = dir == TimeDirection::forward ? n : -n;
  const ScaledMat2 prod = evaluate_scaled(A, signed_n, omega);
  if (prod.log_norm() / static_cast<double>(n) <= threshold)
    throw IllConditionedError("Lyapunov estimate too small to isolate a contracting direction");
  return prod.m.contracted_direction();
}

/// || A(-n, omega) || equals || A(n, T^{-n} omega) ||; both sides computed
/// independently and compared in log scale.
inline bool norm_reflection_check(const LocallyConstantCocycle& A, const PointedBiWord& omega, index_t n,
                                  double rel_tol = 1e-8) {
  if (n < 0) throw std::invalid_argument("norm_reflection_check needs n >= 0");
  const double lhs = evaluate_scaled(A, -n, omega).log_norm();
  const double rhs = evaluate_scaled(A, n, omega.shifted(-n)).log_norm();
  return std::abs(lhs - rhs) <= rel_tol * std::max(1.0, std::max(std::abs(lhs), std::abs(rhs)));
}

// ---------------------------------------------------------------------------
// Three-repetition (Gordon) bound

/// Outcome of the three-point solution bound along an aligned repetition
/// ...w|ww (or its mirror). Norms are reported as logs; the exact bound is
/// max >= log ||v|| - log 2 and holds whenever the three one-period products
/// coincide, which `margin_ok` certifies from the word alone.
struct GordonResult {
  index_t length = 0;
  SquareSide side = SquareSide::pair_right;
  bool pattern_ok = false;   // the bare www window equality
  bool margin_ok = false;    // www plus the margin the cocycle window needs
  double log_norm_back = 0.0;    // log ||v_{-L}||
  double log_norm_mid = 0.0;     // log ||v_{L}||
  double log_norm_front = 0.0;   // log ||v_{2L}||
  double log_input = 0.0;        // log ||v||
  bool exact_bound_holds = false;     // max of the three >= log||v|| - log 2
  double relaxed_slack = 0.0;         // log bound on ||B|| for the general-window variant
  bool relaxed_bound_holds = false;   // max >= log||v|| - log 2 - relaxed_slack
};

/// Checks the three-point lower bound max{||v_{-L}||, ||v_L||, ||v_{2L}||} >=
/// ||v|| / 2 along the repetition, after shifting a mirrored pattern ...ww|w
/// to the canonical ...w|ww frame. The caller certifies the pattern (e.g. via
/// gamma_prime_witnesses); an unverified pattern is reported, not rejected.
inline GordonResult gordon_bound_check(const LocallyConstantCocycle& A, const PointedBiWord& omega_in,
                                       const Word& w, const Vec2& v,
                                       SquareSide side = SquareSide::pair_right) {
  if (w.empty()) throw std::invalid_argument("gordon_bound_check needs a non-empty word");
  GordonResult out;
  out.length = w.size();
  out.side = side;
  const index_t L = w.size();
  const PointedBiWord omega = side == SquareSide::pair_right ? omega_in : omega_in.shifted(-L);

  out.pattern_ok = matches_square(omega, w, SquareSide::pair_right);
  // The three one-period products coincide exactly iff omega has period L on
  // the positions they read: j and j+L for j in [-L+lo, L-1+hi].
  out.margin_ok = out.pattern_ok;
  for (index_t j = -L + A.window_lo(); j <= L - 1 + A.window_hi() && out.margin_ok; ++j)
    if (omega.at(j) != omega.at(j + L)) out.margin_ok = false;

  out.log_input = std::log(v.norm());
  out.log_norm_back = evaluate_applied(A, -L, omega, v).log_norm;
  out.log_norm_mid = evaluate_applied(A, L, omega, v).log_norm;
  out.log_norm_front = evaluate_applied(A, 2 * L, omega, v).log_norm;
  const double best = std::max(out.log_norm_back, std::max(out.log_norm_mid, out.log_norm_front));
  out.exact_bound_holds = best >= out.log_input - std::log(2.0);
  const index_t effective_radius = std::max(std::abs(A.window_lo()), std::abs(A.window_hi()));
  out.relaxed_slack = 4.0 * static_cast<double>(effective_radius) * A.max_log_norm();
  out.relaxed_bound_holds = best >= out.log_input - std::log(2.0) - out.relaxed_slack;
  return out;
}

// ---------------------------------------------------------------------------
// JSON-friendly cocycle table description lives in io.hpp.

}  // namespace subshift

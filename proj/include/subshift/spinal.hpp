/*
 * subshift-spectra: spinal groups on the binary tree: finite Schreier graphs,
 * Markov operators, the associated simple Toeplitz coding and the translation
 * to Jacobi coefficients.
 *
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "subshift/jacobi.hpp"
#include "subshift/toeplitz.hpp"
#include "subshift/word.hpp"

namespace subshift {

/// All 2^m - 1 epimorphisms (Z/2)^m -> Z/2, encoded as nonzero bit masks:
/// phi_mask(b) = parity(mask & b).
inline std::vector<std::uint32_t> enumerate_epimorphisms(int m) {
  if (m < 1) throw std::invalid_argument("epimorphisms need m >= 1");
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) out.push_back(mask);
  return out;
}

inline int parity(std::uint32_t x) { return __builtin_popcount(x) & 1; }

/// Spinal parameters: B = (Z/2)^m acting on the binary tree, steered by the
/// epimorphism sequence xi (masks, 1-indexed) given as prefix + repeating
/// cycle. Validity requires the masks over every tail to span (Z/2)^m.
struct SpinalParams {
  int m = 2;
  std::vector<std::uint32_t> xi_prefix;
  std::vector<std::uint32_t> xi_cycle;

  SpinalParams(int m_, std::vector<std::uint32_t> prefix, std::vector<std::uint32_t> cycle)
      : m(m_), xi_prefix(std::move(prefix)), xi_cycle(std::move(cycle)) {
    if (m < 1) throw std::invalid_argument("spinal groups need m >= 1");
    if (xi_cycle.empty()) throw std::invalid_argument("xi needs a repeating tail cycle");
    for (std::uint32_t mask : xi_prefix) check_mask(mask);
    for (std::uint32_t mask : xi_cycle) check_mask(mask);
  }

  /// The Grigorchuk-pattern parameters: m = 2, xi cycles through all three
  /// epimorphisms.
  static SpinalParams grigorchuk() { return SpinalParams(2, {}, {1, 2, 3}); }

  std::uint32_t xi(index_t r) const {  // 1-indexed
    if (r < 1) throw std::out_of_range("xi is indexed from 1");
    const index_t i = r - 1;
    if (i < static_cast<index_t>(xi_prefix.size())) return xi_prefix[static_cast<std::size_t>(i)];
    return xi_cycle[static_cast<std::size_t>((i - static_cast<index_t>(xi_prefix.size())) %
                                             static_cast<index_t>(xi_cycle.size()))];
  }

  /// Finite-scale check of the tail-kernel condition: for every start t (up to
  /// one past the prefix) the masks {xi_s : s >= t} span (Z/2)^m.
  bool tail_kernels_trivial() const {
    const index_t starts = static_cast<index_t>(xi_prefix.size()) + 1;
    for (index_t t = 1; t <= starts; ++t) {
      std::uint32_t basis[32] = {};
      int rank = 0;
      auto add = [&](std::uint32_t v) {
        for (int bit = 31; bit >= 0; --bit) {
          if (!((v >> bit) & 1u)) continue;
          if (!basis[bit]) {
            basis[bit] = v;
            ++rank;
            return;
          }
          v ^= basis[bit];
        }
      };
      for (index_t s = t; s < t + static_cast<index_t>(xi_prefix.size() + xi_cycle.size()) + 1; ++s)
        add(xi(s));
      if (rank < m) return false;
    }
    return true;
  }

  /// Masks occurring infinitely often.
  std::vector<std::uint32_t> eventual_masks() const {
    std::set<std::uint32_t> s(xi_cycle.begin(), xi_cycle.end());
    return std::vector<std::uint32_t>(s.begin(), s.end());
  }

 private:
  void check_mask(std::uint32_t mask) const {
    if (mask == 0 || mask >= (1u << m)) throw std::invalid_argument("xi masks must be nonzero m-bit values");
  }
};

/// Positive generator weights: p_a for the root swap and one p_b per nonzero
/// b in (Z/2)^m, with total at most 1.
struct SpinalWeights {
  double p_a = 0.0;
  std::vector<double> p_b;  // index b-1 for b = 1 .. 2^m - 1

  SpinalWeights(double a, std::vector<double> b) : p_a(a), p_b(std::move(b)) {
    if (p_a <= 0.0) throw std::invalid_argument("p_a must be positive");
    double total = p_a;
    for (double w : p_b) {
      if (w <= 0.0) throw std::invalid_argument("all p_b must be positive");
      total += w;
    }
    if (total > 1.0 + 1e-12) throw std::invalid_argument("generator weights must sum to at most 1");
  }

  static SpinalWeights isotropic(int m) {
    const int s = 1 << m;  // |S| = 1 + (2^m - 1)
    return SpinalWeights(1.0 / s, std::vector<double>(static_cast<std::size_t>(s - 1), 1.0 / s));
  }

  double weight(std::uint32_t b) const { return p_b.at(static_cast<std::size_t>(b - 1)); }

  double b_mass() const {
    double total = 0.0;
    for (double w : p_b) total += w;
    return total;
  }

  double total() const { return p_a + b_mass(); }

  /// q_phi = sum of p_b over b outside Ker(phi). Summed in ascending b order
  /// so it matches the Markov matrix entries bitwise.
  double edge_weight(std::uint32_t mask) const {
    double q = 0.0;
    for (std::uint32_t b = 1; b < (1u << p_b_bits()); ++b)
      if (parity(mask & b)) q += weight(b);
    return q;
  }

  /// Loop mass at a vertex whose multi-edge carries phi: sum of p_b over
  /// nontrivial b in Ker(phi), ascending b order.
  double kernel_mass(std::uint32_t mask) const {
    double g = 0.0;
    for (std::uint32_t b = 1; b < (1u << p_b_bits()); ++b)
      if (!parity(mask & b)) g += weight(b);
    return g;
  }

 private:
  int p_b_bits() const {
    int bits = 0;
    while ((std::size_t(1) << bits) - 1 < p_b.size()) ++bits;
    return bits;
  }
};

// ---------------------------------------------------------------------------
// Tree action and Schreier graphs

/// Vertices of level n are binary words v(1)..v(n); bit i-1 of the integer
/// encoding stores v(i). The root-adjacent letter v(1) is bit 0.

/// Action of the root swap a: flips v(1).
inline std::uint32_t act_a(std::uint32_t v) { return v ^ 1u; }

/// Action of b in B: on v = 1^r 0 c u it flips c iff xi_{r+1}(b) = 1; the
/// spine 1^n and its neighbour 1^{n-1} 0 are fixed.
inline std::uint32_t act_b(const SpinalParams& params, std::uint32_t b, std::uint32_t v, int level) {
  int r = 0;
  while (r < level && (v >> r) & 1u) ++r;
  if (r >= level - 1) return v;  // 1^n or 1^{n-1}0
  const std::uint32_t mask = params.xi(r + 1);
  if (parity(mask & b)) return v ^ (1u << (r + 1));
  return v;
}

/// Alphabet of the spinal subshift: letter 0 is "a", letter `mask` is the
/// multi-edge label alpha_phi for the epimorphism with that mask, named by the
/// mask's m-bit binary string.
inline Alphabet spinal_alphabet(int m) {
  std::vector<std::string> names;
  names.push_back("a");
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::string bits;
    for (int i = m - 1; i >= 0; --i) bits += ((mask >> i) & 1u) ? '1' : '0';
    names.push_back(bits);
  }
  return Alphabet(std::move(names));
}

/// Finite Schreier graph of level n: a path with loops and multi-edges. The
/// path order starts at the spine vertex 1^n; consecutive vertices are joined
/// either by the single a-edge or by the multi-edge B \ Ker(phi), recorded as
/// the letter alpha_phi.
struct SchreierGraph {
  int level = 0;
  int m = 2;
  std::vector<std::uint32_t> path;   // vertex order along the line, from 1^n
  std::vector<Letter> edge_letters;  // edge i joins path[i] and path[i+1]

  std::size_t size() const { return path.size(); }
};

inline SchreierGraph schreier_graph(const SpinalParams& params, int level) {
  if (level < 1) throw std::invalid_argument("Schreier graphs start at level 1");
  if (level > 25) throw std::invalid_argument("level too large to materialize");
  const std::uint32_t count = 1u << level;
  const std::uint32_t root = count - 1;  // 1^n

  SchreierGraph g;
  g.level = level;
  g.m = params.m;
  g.path.reserve(count);

  std::vector<char> visited(count, 0);
  std::uint32_t current = root;
  std::uint32_t prev = root;  // sentinel: current == prev marks the start
  for (std::uint32_t step = 0; step < count; ++step) {
    g.path.push_back(current);
    visited[current] = 1;
    if (step + 1 == count) break;
    // Neighbours: the a-image and the b-images.
    std::uint32_t next = current;
    Letter letter = -1;
    const std::uint32_t a_img = act_a(current);
    std::uint32_t b_img = current;
    std::uint32_t b_mask_label = 0;
    for (std::uint32_t b = 1; b < (1u << params.m); ++b) {
      const std::uint32_t img = act_b(params, b, current, level);
      if (img != current) {
        if (b_img != current && img != b_img)
          throw std::logic_error("spinal vertex with two distinct multi-edge targets");
        b_img = img;
      }
    }
    if (b_img != current) {
      // Identify the epimorphism: the set {b : b*v != v} must be B \ Ker(phi).
      int r = 0;
      while ((current >> r) & 1u) ++r;
      b_mask_label = params.xi(r + 1);
      for (std::uint32_t b = 1; b < (1u << params.m); ++b) {
        const bool moves = act_b(params, b, current, level) != current;
        if (moves != (parity(b_mask_label & b) == 1))
          throw std::logic_error("multi-edge label set is not of the form B \\ Ker(phi)");
      }
    }
    if (a_img != current && !visited[a_img]) {
      next = a_img;
      letter = 0;
    } else if (b_img != current && !visited[b_img]) {
      next = b_img;
      letter = static_cast<Letter>(b_mask_label);
    } else {
      throw std::logic_error("Schreier graph is not a line");
    }
    g.edge_letters.push_back(letter);
    prev = current;
    current = next;
  }
  (void)prev;
  if (g.path.size() != count) throw std::logic_error("Schreier path does not cover all vertices");
  return g;
}

/// Edge labels along the path from the root 1^n: length 2^n - 1 over the
/// spinal alphabet.
inline Word read_schreier_word(const SchreierGraph& g) {
  return Word(std::vector<Letter>(g.edge_letters.begin(), g.edge_letters.end()));
}

/// The word recursion p^(n+1) = p^(n) alpha_{xi(n+1)} p^(n), p^(0) = "a".
/// Level-n graphs spell p^(n-1); this is the oracle for the cross-check.
inline Word spinal_recursion_word(const SpinalParams& params, int n) {
  Word w({0});
  for (int k = 1; k <= n; ++k) w = w + Word({static_cast<Letter>(params.xi(k))}) + w;
  return w;
}

/// The simple Toeplitz coding of the spinal subshift: a_0 = "a" with n_0 = 2,
/// a_k = alpha_{xi_k} with n_k = 2, normalized (equal consecutive epimorphisms
/// merge into doubled periods). Rejects xi whose eventual alphabet is a single
/// letter.
inline ToeplitzCoding spinal_coding(const SpinalParams& params) {
  if (!params.tail_kernels_trivial())
    throw std::invalid_argument("xi violates the tail-kernel condition at finite scale");
  if (params.eventual_masks().size() < 2)
    throw std::invalid_argument("xi has fewer than two eventual epimorphisms: subshift is periodic");
  std::vector<Letter> letters;
  std::vector<index_t> periods;
  letters.push_back(0);  // "a"
  periods.push_back(2);
  for (std::uint32_t mask : params.xi_prefix) {
    letters.push_back(static_cast<Letter>(mask));
    periods.push_back(2);
  }
  std::vector<Letter> cycle_letters;
  std::vector<index_t> cycle_periods;
  for (std::uint32_t mask : params.xi_cycle) {
    cycle_letters.push_back(static_cast<Letter>(mask));
    cycle_periods.push_back(2);
  }
  const ToeplitzCoding raw(spinal_alphabet(params.m), std::move(letters), std::move(periods),
                           std::move(cycle_letters), std::move(cycle_periods));
  return normalize_coding(raw);
}

// ---------------------------------------------------------------------------
// Markov operators

/// Sparse symmetric Markov matrix M = sum_s p_s s on the level-n vertex set,
/// stored along the path order (where it is tridiagonal).
struct MarkovMatrix {
  std::vector<double> diag;  // loop mass per path vertex
  std::vector<double> off;   // edge weight between consecutive path vertices
  double generator_total = 0.0;

  std::size_t size() const { return diag.size(); }

  /// Entry in path coordinates.
  double entry(std::size_t i, std::size_t j) const {
    if (i == j) return diag[i];
    if (i + 1 == j) return off[i];
    if (j + 1 == i) return off[j];
    return 0.0;
  }

  std::vector<double> eigenvalues(double tol = 1e-10) const { return tridiagonal_eigenvalues(diag, off, tol); }
};

inline MarkovMatrix markov_matrix(const SchreierGraph& g, const SpinalParams& params, const SpinalWeights& w) {
  if (w.p_b.size() != (std::size_t(1) << params.m) - 1)
    throw std::invalid_argument("weights do not match 2^m - 1 nontrivial b's");
  MarkovMatrix out;
  out.generator_total = w.total();
  const std::size_t n = g.size();
  out.diag.assign(n, 0.0);
  out.off.assign(n - 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t v = g.path[i];
    if (act_a(v) == v) out.diag[i] += w.p_a;  // never happens at level >= 1
    for (std::uint32_t b = 1; b < (1u << params.m); ++b)
      if (act_b(params, b, v, g.level) == v) out.diag[i] += w.weight(b);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Letter letter = g.edge_letters[i];
    out.off[i] = letter == 0 ? w.p_a : w.edge_weight(static_cast<std::uint32_t>(letter));
  }
  return out;
}

/// Jacobi coefficients of the spinal subshift: f is the edge weight of the
/// letter at the current position (p_a for "a", q_phi for alpha_phi); g is the
/// loop mass of the vertex between positions 0 and 1, i.e. the kernel mass of
/// whichever of the two adjacent letters is a multi-edge.
inline JacobiCoefficients spinal_to_jacobi(const SpinalParams& params, const SpinalWeights& w) {
  const int alphabet_size = 1 << params.m;
  std::vector<double> f_values(static_cast<std::size_t>(alphabet_size));
  f_values[0] = w.p_a;
  for (std::uint32_t mask = 1; mask < (1u << params.m); ++mask)
    f_values[mask] = w.edge_weight(mask);
  LocallyConstantScalar f = LocallyConstantScalar::per_letter(std::move(f_values));
  LocallyConstantScalar g =
      LocallyConstantScalar::from_function(0, 1, alphabet_size, [&](std::span<const Letter> pair) {
        const Letter left = pair[0];
        const Letter right = pair[1];
        if (left != 0) return w.kernel_mass(static_cast<std::uint32_t>(left));
        if (right != 0) return w.kernel_mass(static_cast<std::uint32_t>(right));
        return 0.0;  // "aa" never occurs in the subshift
      });
  return JacobiCoefficients(std::move(f), std::move(g), alphabet_size);
}

/// Spectrum of the isotropic Markov operator on the infinite Schreier graph:
/// [-1/2^{m-1}, 0] union [1 - 1/2^{m-1}, 1].
inline BandSet isotropic_interval(int m) {
  if (m < 2) throw std::invalid_argument("isotropic interval needs m >= 2");
  const double r = 1.0 / static_cast<double>(std::size_t(1) << (m - 1));
  return BandSet::from_intervals({{-r, 0.0}, {1.0 - r, 1.0}});
}

/// Where the Markov tridiagonal and the Jacobi interior rule may differ: the
/// two path endpoints, whose loop mass comes from the spine's fixed
/// generators.
struct BoundaryDiscrepancy {
  int rows_differing = 0;
  double max_abs = 0.0;
};

inline BoundaryDiscrepancy markov_vs_jacobi(const MarkovMatrix& markov, const SchreierGraph& g,
                                            const SpinalParams& params, const SpinalWeights& w) {
  const JacobiCoefficients J = spinal_to_jacobi(params, w);
  const Word word = read_schreier_word(g);
  BoundaryDiscrepancy out;
  // Interior vertex i sits between letters word[i-1] and word[i].
  for (std::size_t i = 0; i < markov.size(); ++i) {
    double expected_diag;
    if (i == 0 || i + 1 == markov.size()) {
      expected_diag = markov.diag[i];  // boundary rows are exempt
    } else {
      expected_diag =
          J.g.at_window(std::array<Letter, 2>{word[static_cast<index_t>(i - 1)], word[static_cast<index_t>(i)]});
    }
    const double diff = std::abs(markov.diag[i] - expected_diag);
    if (diff != 0.0) {
      ++out.rows_differing;
      out.max_abs = std::max(out.max_abs, diff);
    }
  }
  for (std::size_t i = 0; i + 1 < markov.size(); ++i) {
    const double expected_off = J.f.at_window(std::array<Letter, 1>{word[static_cast<index_t>(i)]});
    const double diff = std::abs(markov.off[i] - expected_off);
    if (diff != 0.0) {
      ++out.rows_differing;
      out.max_abs = std::max(out.max_abs, diff);
    }
  }
  return out;
}

/// Loop masses at the two path endpoints versus the interior rule, for the
/// boundary-row comparison of the finite graph.
inline std::pair<double, double> boundary_loop_masses(const MarkovMatrix& markov) {
  return {markov.diag.front(), markov.diag.back()};
}

}  // namespace subshift

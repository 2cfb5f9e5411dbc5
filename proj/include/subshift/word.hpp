/*
 * subshift-spectra: finite words, alphabets and lazily generated infinite words.
 *
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace subshift {

using Letter = std::int32_t;
using index_t = std::int64_t;

/// Finite set of printable symbol names. Letters are indices into this table;
/// all combinatorial loops work on the integer ids, names exist only for I/O.
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw std::invalid_argument("alphabet must be non-empty");
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i].empty()) throw std::invalid_argument("alphabet name must be non-empty");
      if (!index_.emplace(names_[i], static_cast<Letter>(i)).second)
        throw std::invalid_argument("alphabet names must be distinct: " + names_[i]);
    }
  }

  static Alphabet from_chars(std::string_view chars) {
    std::vector<std::string> names;
    names.reserve(chars.size());
    for (char c : chars) names.emplace_back(1, c);
    return Alphabet(std::move(names));
  }

  /// The {0,1} alphabet used by Sturmian words.
  static Alphabet binary01() { return from_chars("01"); }

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(Letter id) const { return names_.at(static_cast<std::size_t>(id)); }

  Letter letter(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) throw std::invalid_argument("unknown letter name: " + std::string(name));
    return it->second;
  }

  bool has(std::string_view name) const { return index_.count(std::string(name)) > 0; }

  bool single_char() const {
    return std::all_of(names_.begin(), names_.end(), [](const auto& n) { return n.size() == 1; });
  }

  bool operator==(const Alphabet& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Letter> index_;
};

/// Immutable finite sequence of letters.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  Word(std::initializer_list<Letter> letters) : letters_(letters) {}

  static Word parse(std::string_view text, const Alphabet& alphabet);

  index_t size() const { return static_cast<index_t>(letters_.size()); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](index_t i) const { return letters_[static_cast<std::size_t>(i)]; }

  Letter at(index_t i) const {
    if (i < 0 || i >= size()) throw std::out_of_range("word index out of range");
    return letters_[static_cast<std::size_t>(i)];
  }

  const std::vector<Letter>& letters() const { return letters_; }
  std::span<const Letter> span() const { return letters_; }

  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }

  Word slice(index_t pos, index_t len) const {
    if (pos < 0 || len < 0 || pos + len > size()) throw std::out_of_range("bad word slice");
    return Word(std::vector<Letter>(letters_.begin() + pos, letters_.begin() + pos + len));
  }

  bool is_prefix_of(const Word& w) const {
    return size() <= w.size() && std::equal(begin(), end(), w.begin());
  }

  bool is_suffix_of(const Word& w) const {
    return size() <= w.size() && std::equal(begin(), end(), w.end() - letters_.size());
  }

  bool is_palindrome() const {
    for (index_t i = 0, j = size() - 1; i < j; ++i, --j)
      if (letters_[static_cast<std::size_t>(i)] != letters_[static_cast<std::size_t>(j)]) return false;
    return true;
  }

  friend Word operator+(const Word& x, const Word& y) {
    std::vector<Letter> out;
    out.reserve(x.letters_.size() + y.letters_.size());
    out.insert(out.end(), x.letters_.begin(), x.letters_.end());
    out.insert(out.end(), y.letters_.begin(), y.letters_.end());
    return Word(std::move(out));
  }

  bool operator==(const Word&) const = default;
  auto operator<=>(const Word&) const = default;

 private:
  std::vector<Letter> letters_;
};

struct WordHash {
  std::size_t operator()(const Word& w) const {
    std::uint64_t h = 1469598103934665603ull;
    for (Letter l : w) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(l));
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

/// w read backwards. Involution: reflect(reflect(w)) == w.
inline Word reflect(const Word& w) {
  std::vector<Letter> out(w.letters().rbegin(), w.letters().rend());
  return Word(std::move(out));
}

namespace detail {

/// KMP failure table of v.
inline std::vector<index_t> kmp_failure(std::span<const Letter> v) {
  std::vector<index_t> fail(v.size(), 0);
  for (std::size_t i = 1; i < v.size(); ++i) {
    index_t k = fail[i - 1];
    while (k > 0 && v[i] != v[static_cast<std::size_t>(k)]) k = fail[static_cast<std::size_t>(k - 1)];
    if (v[i] == v[static_cast<std::size_t>(k)]) ++k;
    fail[i] = k;
  }
  return fail;
}

/// Start positions of all (possibly overlapping) occurrences of v in w.
inline std::vector<index_t> occurrence_positions(std::span<const Letter> v, std::span<const Letter> w) {
  std::vector<index_t> out;
  if (v.empty() || v.size() > w.size()) return out;
  const auto fail = kmp_failure(v);
  index_t k = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    while (k > 0 && w[i] != v[static_cast<std::size_t>(k)]) k = fail[static_cast<std::size_t>(k - 1)];
    if (w[i] == v[static_cast<std::size_t>(k)]) ++k;
    if (k == static_cast<index_t>(v.size())) {
      out.push_back(static_cast<index_t>(i + 1) - k);
      k = fail[static_cast<std::size_t>(k - 1)];
    }
  }
  return out;
}

}  // namespace detail

inline std::vector<index_t> occurrence_positions(const Word& v, const Word& w) {
  if (v.empty()) throw std::invalid_argument("occurrences of the empty word are not defined");
  return detail::occurrence_positions(v.span(), w.span());
}

/// Number of (possibly overlapping) occurrences of v in w.
inline index_t count_occurrences(const Word& v, const Word& w) {
  return static_cast<index_t>(occurrence_positions(v, w).size());
}

/// Maximal number of mutually disjoint occurrences of v in w.
///
/// Computed greedily left to right over the occurrence list. All candidate
/// intervals have equal length, so picking the earliest compatible occurrence
/// is the classical earliest-right-endpoint rule for interval scheduling and
/// the greedy count is exact, not a heuristic.
inline index_t count_disjoint_occurrences(const Word& v, const Word& w) {
  const auto occ = occurrence_positions(v, w);
  index_t count = 0;
  index_t next_free = 0;
  for (index_t pos : occ) {
    if (pos >= next_free) {
      ++count;
      next_free = pos + v.size();
    }
  }
  return count;
}

/// One-sided infinite word, positions 0,1,2,... backed by a generator.
/// Window extension is memoized; repeated reads of the same position always
/// return the same letter. Safe under concurrent reads.
class Stream {
 public:
  using Generator = std::function<Letter(index_t)>;

  explicit Stream(Generator gen) : state_(std::make_shared<State>(std::move(gen))) {}

  static Stream constant(Letter l) {
    return Stream([l](index_t) { return l; });
  }

  static Stream periodic(Word period) {
    if (period.empty()) throw std::invalid_argument("period must be non-empty");
    auto p = std::make_shared<Word>(std::move(period));
    return Stream([p](index_t i) { return (*p)[i % p->size()]; });
  }

  Letter at(index_t i) const {
    if (i < 0) throw std::out_of_range("stream positions start at 0");
    std::lock_guard<std::mutex> lock(state_->mu);
    extend_locked(i);
    return state_->cache[static_cast<std::size_t>(i)];
  }

  /// The word at positions [pos, pos+len).
  Word slice(index_t pos, index_t len) const {
    if (pos < 0 || len < 0) throw std::out_of_range("bad stream slice");
    if (len == 0) return Word();
    std::lock_guard<std::mutex> lock(state_->mu);
    extend_locked(pos + len - 1);
    return Word(std::vector<Letter>(state_->cache.begin() + pos, state_->cache.begin() + pos + len));
  }

  Word prefix(index_t len) const { return slice(0, len); }

 private:
  struct State {
    explicit State(Generator g) : gen(std::move(g)) {}
    Generator gen;
    std::vector<Letter> cache;
    mutable std::mutex mu;
  };

  void extend_locked(index_t upto) const {
    auto& cache = state_->cache;
    while (static_cast<index_t>(cache.size()) <= upto)
      cache.push_back(state_->gen(static_cast<index_t>(cache.size())));
  }

  std::shared_ptr<State> state_;
};

/// Two-sided pointed word omega = rho|eta. Position 0 is the first letter of
/// the right half; negative positions index the left half. Backed by a
/// generator with memoized, idempotent window extension (thread safe).
class PointedBiWord {
 public:
  using Generator = std::function<Letter(index_t)>;

  explicit PointedBiWord(Generator gen) : state_(std::make_shared<State>(std::move(gen))), shift_(0) {}

  static PointedBiWord periodic(Word period) {
    if (period.empty()) throw std::invalid_argument("period must be non-empty");
    auto p = std::make_shared<Word>(std::move(period));
    const index_t n = p->size();
    return PointedBiWord([p, n](index_t i) { return (*p)[((i % n) + n) % n]; });
  }

  /// The pointed word p^R v | p: v occupies positions [-|v|, -1], the stream p
  /// starts at position 0 and its reflection continues to the left of v.
  static PointedBiWord reflected_with_core(const Stream& p, const Word& v) {
    const index_t m = v.size();
    auto core = std::make_shared<Word>(v);
    return PointedBiWord([p, core, m](index_t i) -> Letter {
      if (i >= 0) return p.at(i);
      if (i >= -m) return (*core)[i + m];
      return p.at(-i - m - 1);
    });
  }

  Letter at(index_t i) const {
    i += shift_;
    std::lock_guard<std::mutex> lock(state_->mu);
    return letter_locked(i);
  }

  /// The word at positions [lo, hi], inclusive on both ends.
  Word window(index_t lo, index_t hi) const {
    if (lo > hi) return Word();
    std::vector<Letter> out;
    out.reserve(static_cast<std::size_t>(hi - lo + 1));
    std::lock_guard<std::mutex> lock(state_->mu);
    for (index_t i = lo; i <= hi; ++i) out.push_back(letter_locked(i + shift_));
    return Word(std::move(out));
  }

  /// T^k omega; shares the memoization cache of this word.
  PointedBiWord shifted(index_t k) const {
    PointedBiWord out = *this;
    out.shift_ += k;
    return out;
  }

  /// The right half as a one-sided stream.
  Stream right_half() const {
    PointedBiWord self = *this;
    return Stream([self](index_t i) { return self.at(i); });
  }

 private:
  struct State {
    explicit State(Generator g) : gen(std::move(g)) {}
    Generator gen;
    std::vector<Letter> right;  // positions 0,1,2,...
    std::vector<Letter> left;   // positions -1,-2,...
    mutable std::mutex mu;
  };

  Letter letter_locked(index_t i) const {
    if (i >= 0) {
      auto& right = state_->right;
      while (static_cast<index_t>(right.size()) <= i)
        right.push_back(state_->gen(static_cast<index_t>(right.size())));
      return right[static_cast<std::size_t>(i)];
    }
    auto& left = state_->left;
    const index_t slot = -i - 1;
    while (static_cast<index_t>(left.size()) <= slot)
      left.push_back(state_->gen(-static_cast<index_t>(left.size()) - 1));
    return left[static_cast<std::size_t>(slot)];
  }

  std::shared_ptr<State> state_;
  index_t shift_;
};

/// The length-n window omega(-k) ... omega(-k+n-1): k of its letters lie
/// strictly left of the origin. Requires 0 <= k <= n; k = 0 starts at the
/// origin and k = n ends just left of it.
inline Word central_window(const PointedBiWord& omega, index_t k, index_t n) {
  if (n <= 0) throw std::invalid_argument("central_window needs n >= 1");
  if (k < 0 || k > n) throw std::invalid_argument("central_window needs 0 <= k <= n");
  return omega.window(-k, -k + n - 1);
}

namespace detail {

/// Distinct length-n subwords of the letter range [0, range.size()-n], exact
/// (hash buckets are verified letter-by-letter before deduplication).
inline std::set<Word> distinct_factors(std::span<const Letter> range, index_t n) {
  std::set<Word> out;
  const index_t len = static_cast<index_t>(range.size());
  if (n <= 0 || n > len) return out;
  constexpr std::uint64_t kBase = 1099511628211ull;
  std::uint64_t power = 1;
  for (index_t i = 0; i < n - 1; ++i) power *= kBase;
  std::uint64_t h = 0;
  for (index_t i = 0; i < n; ++i)
    h = h * kBase + static_cast<std::uint32_t>(range[static_cast<std::size_t>(i)]);
  std::unordered_map<std::uint64_t, std::vector<index_t>> buckets;
  auto consider = [&](std::uint64_t hash, index_t start) {
    auto& bucket = buckets[hash];
    for (index_t other : bucket) {
      if (std::equal(range.begin() + start, range.begin() + start + n, range.begin() + other)) return;
    }
    bucket.push_back(start);
  };
  consider(h, 0);
  for (index_t start = 1; start + n <= len; ++start) {
    h -= power * static_cast<std::uint32_t>(range[static_cast<std::size_t>(start - 1)]);
    h = h * kBase + static_cast<std::uint32_t>(range[static_cast<std::size_t>(start + n - 1)]);
    consider(h, start);
  }
  for (const auto& [hash, starts] : buckets)
    for (index_t start : starts)
      out.insert(Word(std::vector<Letter>(range.begin() + start, range.begin() + start + n)));
  return out;
}

}  // namespace detail

/// All distinct length-n subwords within the first `horizon` positions of w.
inline std::set<Word> factors_of_length(const Word& w, index_t n, index_t horizon) {
  if (n <= 0) throw std::invalid_argument("factor length must be >= 1");
  if (horizon < n) throw std::invalid_argument("horizon must be >= factor length");
  const index_t observed = std::min(horizon, w.size());
  return detail::distinct_factors(w.span().subspan(0, static_cast<std::size_t>(observed)), n);
}

/// All distinct length-n subwords within the first `horizon` positions of the stream.
inline std::set<Word> factors_of_length(const Stream& p, index_t n, index_t horizon) {
  if (n <= 0) throw std::invalid_argument("factor length must be >= 1");
  if (horizon < n) throw std::invalid_argument("horizon must be >= factor length");
  const Word observed = p.prefix(horizon);
  return detail::distinct_factors(observed.span(), n);
}

/// All distinct length-n subwords seen within distance `horizon` of the origin
/// (both halves, including subwords straddling the origin).
inline std::set<Word> factors_of_length(const PointedBiWord& omega, index_t n, index_t horizon) {
  if (n <= 0) throw std::invalid_argument("factor length must be >= 1");
  if (horizon < n) throw std::invalid_argument("horizon must be >= factor length");
  const Word observed = omega.window(-horizon, horizon);
  return detail::distinct_factors(observed.span(), n);
}

/// Letterwise image of w under the map l -> image[l]. The map must be total
/// on the source alphabet.
inline Word apply_morphism(const Word& w, const std::vector<Letter>& image) {
  std::vector<Letter> out;
  out.reserve(static_cast<std::size_t>(w.size()));
  for (Letter l : w) {
    if (l < 0 || static_cast<std::size_t>(l) >= image.size())
      throw std::invalid_argument("morphism is not total on the source alphabet");
    out.push_back(image[static_cast<std::size_t>(l)]);
  }
  return Word(std::move(out));
}

/// Letterwise image of a pointed word; the origin is preserved.
inline PointedBiWord apply_morphism(const PointedBiWord& omega, std::vector<Letter> image) {
  auto img = std::make_shared<std::vector<Letter>>(std::move(image));
  return PointedBiWord([omega, img](index_t i) -> Letter {
    const Letter l = omega.at(i);
    if (l < 0 || static_cast<std::size_t>(l) >= img->size())
      throw std::invalid_argument("morphism is not total on the source alphabet");
    return (*img)[static_cast<std::size_t>(l)];
  });
}

// ---------------------------------------------------------------------------
// Plain-text serialization. Single-character alphabets concatenate letters;
// alphabets with longer names join them with '.'. Pointed windows mark the
// origin with '|' between positions -1 and 0.

inline std::string to_string(const Word& w, const Alphabet& alphabet) {
  std::string out;
  const bool compact = alphabet.single_char();
  for (index_t i = 0; i < w.size(); ++i) {
    if (!compact && i > 0) out += '.';
    out += alphabet.name(w[i]);
  }
  return out;
}

inline std::string to_string(const PointedBiWord& omega, const Alphabet& alphabet, index_t lo, index_t hi) {
  std::string out;
  const bool compact = alphabet.single_char();
  bool first = true;
  for (index_t i = lo; i <= hi; ++i) {
    if (i == 0 && lo < 0) out += '|';
    else if (!compact && !first) out += '.';
    out += alphabet.name(omega.at(i));
    first = false;
  }
  return out;
}

inline Word Word::parse(std::string_view text, const Alphabet& alphabet) {
  std::vector<Letter> letters;
  if (text.find('.') != std::string_view::npos) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t dot = text.find('.', pos);
      const std::string_view tok = text.substr(pos, dot == std::string_view::npos ? dot : dot - pos);
      if (!tok.empty()) letters.push_back(alphabet.letter(tok));
      if (dot == std::string_view::npos) break;
      pos = dot + 1;
    }
  } else {
    for (char c : text) letters.push_back(alphabet.letter(std::string_view(&c, 1)));
  }
  return Word(std::move(letters));
}

}  // namespace subshift

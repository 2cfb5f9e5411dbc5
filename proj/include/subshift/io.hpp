/*
 * subshift-spectra: file formats and report emission: coding files, xi files,
 * continued-fraction specs, cocycle tables (JSON), CSV tables and SVG plots.
 *
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include <json.hpp>

#include "subshift/cocycle.hpp"
#include "subshift/jacobi.hpp"
#include "subshift/lsc.hpp"
#include "subshift/spinal.hpp"
#include "subshift/sturmian.hpp"
#include "subshift/toeplitz.hpp"

namespace subshift {

using json = nlohmann::ordered_json;

namespace detail {

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream in(text);
  while (std::getline(in, tok, sep)) out.push_back(tok);
  return out;
}

inline std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

/// Splits "x,y,z;repeat:u,v" into prefix tokens and cycle tokens. The repeat
/// clause may also stand alone ("repeat:u,v").
inline std::pair<std::vector<std::string>, std::vector<std::string>> split_repeat_spec(const std::string& spec) {
  std::string prefix_part = spec;
  std::string cycle_part;
  const auto at = spec.find("repeat:");
  if (at != std::string::npos) {
    cycle_part = spec.substr(at + 7);
    prefix_part = spec.substr(0, at);
    const auto semi = prefix_part.find_last_of(';');
    if (semi != std::string::npos) prefix_part = prefix_part.substr(0, semi);
  }
  auto to_tokens = [](const std::string& part) {
    std::vector<std::string> out;
    for (const auto& piece : split(part, ',')) {
      const std::string t = strip(piece);
      if (!t.empty()) out.push_back(t);
    }
    return out;
  };
  return {to_tokens(strip(prefix_part)), to_tokens(strip(cycle_part))};
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Toeplitz coding files
//
//   line 1: alphabet names, whitespace separated
//   line 2: letters prefix + tail, e.g. "a repeat:x,y,z"
//   line 3: periods prefix + tail, e.g. "2 repeat:2"

inline ToeplitzCoding parse_toeplitz_coding(std::istream& in) {
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) {
    const std::string t = detail::strip(line);
    if (!t.empty() && t[0] != '#') lines.push_back(t);
  }
  if (lines.size() < 3) throw std::invalid_argument("coding file needs alphabet, letters and periods lines");
  Alphabet alphabet(detail::tokens(lines[0]));

  auto parse_letters = [&](const std::string& spec) {
    std::vector<Letter> prefix, cycle;
    std::string rebuilt;
    for (const auto& tok : detail::tokens(spec)) rebuilt += (rebuilt.empty() ? "" : ",") + tok;
    auto [pre, cyc] = detail::split_repeat_spec(rebuilt);
    for (const auto& t : pre) prefix.push_back(alphabet.letter(t));
    for (const auto& t : cyc) cycle.push_back(alphabet.letter(t));
    return std::make_pair(prefix, cycle);
  };
  auto parse_periods = [&](const std::string& spec) {
    std::vector<index_t> prefix, cycle;
    std::string rebuilt;
    for (const auto& tok : detail::tokens(spec)) rebuilt += (rebuilt.empty() ? "" : ",") + tok;
    auto [pre, cyc] = detail::split_repeat_spec(rebuilt);
    for (const auto& t : pre) prefix.push_back(std::stoll(t));
    for (const auto& t : cyc) cycle.push_back(std::stoll(t));
    return std::make_pair(prefix, cycle);
  };
  auto [lp, lc] = parse_letters(lines[1]);
  auto [pp, pc] = parse_periods(lines[2]);
  // The two lines may use repeat cycles of different lengths; align them by
  // replicating both cycles to a common length after a common prefix.
  if (lc.empty() != pc.empty())
    throw std::invalid_argument("letters and periods must both be finite or both have repeat clauses");
  if (lc.empty()) return ToeplitzCoding(std::move(alphabet), std::move(lp), std::move(pp), {}, {});
  auto letter_at = [&](index_t k) {
    return k < static_cast<index_t>(lp.size())
               ? lp[static_cast<std::size_t>(k)]
               : lc[static_cast<std::size_t>((k - static_cast<index_t>(lp.size())) %
                                             static_cast<index_t>(lc.size()))];
  };
  auto period_at = [&](index_t k) {
    return k < static_cast<index_t>(pp.size())
               ? pp[static_cast<std::size_t>(k)]
               : pc[static_cast<std::size_t>((k - static_cast<index_t>(pp.size())) %
                                             static_cast<index_t>(pc.size()))];
  };
  const index_t prefix_len = std::max(lp.size(), pp.size());
  const index_t cycle_len = static_cast<index_t>(std::lcm(lc.size(), pc.size()));
  std::vector<Letter> letters_prefix, letters_cycle;
  std::vector<index_t> periods_prefix, periods_cycle;
  for (index_t k = 0; k < prefix_len; ++k) {
    letters_prefix.push_back(letter_at(k));
    periods_prefix.push_back(period_at(k));
  }
  for (index_t j = 0; j < cycle_len; ++j) {
    letters_cycle.push_back(letter_at(prefix_len + j));
    periods_cycle.push_back(period_at(prefix_len + j));
  }
  return ToeplitzCoding(std::move(alphabet), std::move(letters_prefix), std::move(periods_prefix),
                        std::move(letters_cycle), std::move(periods_cycle));
}

inline ToeplitzCoding load_toeplitz_coding(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open coding file: " + path);
  return parse_toeplitz_coding(in);
}

// ---------------------------------------------------------------------------
// Sturmian continued-fraction specs: "1,2;repeat:3" or "repeat:1"

inline SturmianCF parse_sturmian_spec(const std::string& spec) {
  auto [pre, cyc] = detail::split_repeat_spec(spec);
  std::vector<index_t> prefix, cycle;
  for (const auto& t : pre) prefix.push_back(std::stoll(t));
  for (const auto& t : cyc) cycle.push_back(std::stoll(t));
  if (cycle.empty() && !prefix.empty()) {
    // A bare list is treated as prefix with its last quotient repeating.
    cycle.push_back(prefix.back());
    prefix.pop_back();
  }
  return SturmianCF(std::move(prefix), std::move(cycle));
}

// ---------------------------------------------------------------------------
// Spinal xi files: "m=2; xi=1,2,3;repeat:1,2,3; weights=0.25,0.25,0.25,0.25"
// Masks may be decimal or m-bit binary strings; weights may be "isotropic".

struct SpinalModel {
  SpinalParams params;
  SpinalWeights weights;
};

inline SpinalModel parse_xi_spec(const std::string& text) {
  int m = 0;
  std::string xi_spec, weight_spec;
  for (const auto& piece : detail::split(text, ';')) {
    const std::string t = detail::strip(piece);
    if (t.rfind("m=", 0) == 0) m = std::stoi(t.substr(2));
    else if (t.rfind("xi=", 0) == 0) xi_spec = t.substr(3);
    else if (t.rfind("weights=", 0) == 0) weight_spec = t.substr(8);
    else if (t.rfind("repeat:", 0) == 0 && !xi_spec.empty() && weight_spec.empty())
      xi_spec += ";" + t;  // the repeat clause of xi= was split on ';'
  }
  if (m < 1) throw std::invalid_argument("xi spec needs m=<int>");
  if (xi_spec.empty()) throw std::invalid_argument("xi spec needs xi=<masks>");
  auto parse_mask = [&](const std::string& tok) -> std::uint32_t {
    const bool binary = static_cast<int>(tok.size()) == m &&
                        tok.find_first_not_of("01") == std::string::npos && m > 1;
    if (binary) return static_cast<std::uint32_t>(std::stoul(tok, nullptr, 2));
    return static_cast<std::uint32_t>(std::stoul(tok));
  };
  auto [pre, cyc] = detail::split_repeat_spec(xi_spec);
  std::vector<std::uint32_t> prefix, cycle;
  for (const auto& t : pre) prefix.push_back(parse_mask(t));
  for (const auto& t : cyc) cycle.push_back(parse_mask(t));
  SpinalParams params(m, std::move(prefix), std::move(cycle));

  if (weight_spec.empty() || weight_spec == "isotropic")
    return {params, SpinalWeights::isotropic(m)};
  const auto toks = detail::split(weight_spec, ',');
  if (static_cast<int>(toks.size()) != (1 << m))
    throw std::invalid_argument("weights need p_a plus 2^m - 1 values");
  const double p_a = std::stod(detail::strip(toks[0]));
  std::vector<double> p_b;
  for (std::size_t i = 1; i < toks.size(); ++i) p_b.push_back(std::stod(detail::strip(toks[i])));
  return {params, SpinalWeights(p_a, std::move(p_b))};
}

inline SpinalModel load_xi_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open xi file: " + path);
  std::string text, line;
  while (std::getline(in, line)) {
    const std::string t = detail::strip(line);
    if (!t.empty() && t[0] != '#') text += t + " ";
  }
  return parse_xi_spec(text);
}

// ---------------------------------------------------------------------------
// Cocycle tables as JSON: {"alphabet": [...], "radius": N, "entries":
// {"window-word": [a, b, c, d], ...}}

inline json cocycle_to_json(const LocallyConstantCocycle& A, const Alphabet& alphabet) {
  if (A.window_lo() != -A.window_hi()) throw std::invalid_argument("JSON tables use symmetric windows");
  json out;
  out["alphabet"] = json::array();
  for (Letter l = 0; l < alphabet.size(); ++l) out["alphabet"].push_back(alphabet.name(l));
  out["radius"] = A.window_hi();
  json entries = json::object();
  const index_t len = A.window_length();
  std::vector<Letter> window(static_cast<std::size_t>(len), 0);
  const auto total = static_cast<std::size_t>(std::pow(alphabet.size(), static_cast<double>(len)) + 0.5);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    for (std::size_t j = window.size(); j-- > 0;) {
      window[j] = static_cast<Letter>(rest % static_cast<std::size_t>(alphabet.size()));
      rest /= static_cast<std::size_t>(alphabet.size());
    }
    const Mat2 m = A.at_window(window);
    entries[to_string(Word(window), alphabet)] = {m.a, m.b, m.c, m.d};
  }
  out["entries"] = std::move(entries);
  return out;
}

inline std::pair<LocallyConstantCocycle, Alphabet> cocycle_from_json(const json& j) {
  std::vector<std::string> names;
  for (const auto& n : j.at("alphabet")) names.push_back(n.get<std::string>());
  Alphabet alphabet(names);
  const int radius = j.at("radius").get<int>();
  std::vector<std::pair<Word, Mat2>> entries;
  for (const auto& [key, value] : j.at("entries").items()) {
    const Word w = Word::parse(key, alphabet);
    entries.emplace_back(w, Mat2{value.at(0).get<double>(), value.at(1).get<double>(),
                                 value.at(2).get<double>(), value.at(3).get<double>()});
  }
  return {LocallyConstantCocycle::from_table(radius, alphabet.size(), entries), alphabet};
}

// ---------------------------------------------------------------------------
// Schreier graphs as DOT

/// Graphviz rendering with labelled path edges and the loop mass per vertex.
inline std::string schreier_dot(const SchreierGraph& g, const SpinalParams& params, const SpinalWeights& w) {
  const Alphabet alphabet = spinal_alphabet(g.m);
  auto vertex_name = [&](std::uint32_t v) {
    std::string bits;
    for (int i = 0; i < g.level; ++i) bits += ((v >> i) & 1u) ? '1' : '0';
    return bits;
  };
  std::string dot = "graph schreier_level_" + std::to_string(g.level) + " {\n  rankdir=LR;\n";
  for (std::size_t i = 0; i < g.path.size(); ++i) {
    double loops = 0.0;
    for (std::uint32_t b = 1; b < (1u << params.m); ++b)
      if (act_b(params, b, g.path[i], g.level) == g.path[i]) loops += w.weight(b);
    dot += "  \"" + vertex_name(g.path[i]) + "\" [label=\"" + vertex_name(g.path[i]) + "\\nloops " +
           detail::format_double(loops) + "\"];\n";
  }
  for (std::size_t i = 0; i + 1 < g.path.size(); ++i) {
    const Letter letter = g.edge_letters[i];
    dot += "  \"" + vertex_name(g.path[i]) + "\" -- \"" + vertex_name(g.path[i + 1]) + "\" [label=\"" +
           alphabet.name(letter) + "\"];\n";
  }
  dot += "}\n";
  return dot;
}

// ---------------------------------------------------------------------------
// Report serialization

inline json to_json(const AlphaReport& r, const Alphabet& alphabet) {
  json out;
  out["condition"] = "alpha";
  out["n"] = r.n;
  out["horizon"] = r.horizon;
  out["verdict"] = r.holds_at_scale ? "holds-at-scale" : "fails-at-scale";
  out["factor_count"] = r.factor_count;
  out["covered_count"] = r.covered_count;
  json missing = json::array();
  for (const Word& w : r.missing) missing.push_back(to_string(w, alphabet));
  out["missing"] = std::move(missing);
  return out;
}

inline json to_json(const PqReport& r, const Alphabet& alphabet) {
  json out;
  out["condition"] = "pq";
  out["prefix"] = to_string(r.prefix, alphabet);
  out["constant"] = r.constant;
  out["tolerance"] = r.tolerance;
  out["verdict"] = r.holds_at_scale ? "holds-at-scale" : "fails-at-scale";
  json densities = json::array();
  for (const auto& [L, d] : r.densities) densities.push_back({{"L", L}, {"density", d}});
  out["densities"] = std::move(densities);
  return out;
}

inline json to_json(const std::vector<GammaWitness>& witnesses, const Alphabet& alphabet) {
  json out;
  out["condition"] = "gamma_prime";
  out["verdict"] = witnesses.empty() ? "fails-at-scale" : "holds-at-scale";
  json list = json::array();
  for (const auto& w : witnesses)
    list.push_back({{"w", to_string(w.w, alphabet)}, {"length", w.w.size()}, {"pattern", to_string(w.side)}});
  out["witnesses"] = std::move(list);
  return out;
}

inline json to_json(const CantorProfile& profile) {
  json out;
  out["verdict"] = profile.verdict;
  json rows = json::array();
  for (const auto& row : profile.rows)
    rows.push_back({{"level", row.level},
                    {"period_length", row.period_length},
                    {"band_count", row.band_count},
                    {"measure", row.measure}});
  out["levels"] = std::move(rows);
  return out;
}

// ---------------------------------------------------------------------------
// CSV

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

inline std::string bands_csv(const std::vector<std::pair<int, BandSet>>& per_level) {
  std::string out = "level,lo,hi\n";
  for (const auto& [level, bands] : per_level)
    for (const Interval& iv : bands.intervals())
      out += std::to_string(level) + "," + detail::format_double(iv.lo) + "," + detail::format_double(iv.hi) + "\n";
  return out;
}

inline std::string eigenvalues_csv(const std::vector<std::pair<int, std::vector<double>>>& per_level) {
  std::string out = "level,index,eigenvalue\n";
  for (const auto& [level, eigen] : per_level)
    for (std::size_t i = 0; i < eigen.size(); ++i)
      out += std::to_string(level) + "," + std::to_string(i) + "," + detail::format_double(eigen[i]) + "\n";
  return out;
}

inline std::string measures_csv(const CantorProfile& profile) {
  std::string out = "level,period_length,band_count,measure\n";
  for (const auto& row : profile.rows)
    out += std::to_string(row.level) + "," + std::to_string(row.period_length) + "," +
           std::to_string(row.band_count) + "," + detail::format_double(row.measure) + "\n";
  return out;
}

inline std::string spread_csv(const std::vector<index_t>& ns,
                              const std::vector<std::pair<double, std::vector<SpreadResult>>>& per_energy) {
  std::string out = "energy,n,min,max,spread\n";
  for (const auto& [E, results] : per_energy)
    for (std::size_t i = 0; i < results.size(); ++i)
      out += detail::format_double(E) + "," + std::to_string(ns[i]) + "," +
             detail::format_double(results[i].min) + "," + detail::format_double(results[i].max) + "," +
             detail::format_double(results[i].spread) + "\n";
  return out;
}

inline std::string factors_csv(const std::set<Word>& factors, const Alphabet& alphabet) {
  std::string out = "factor\n";
  for (const Word& w : factors) out += to_string(w, alphabet) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// SVG (plain rect/line primitives; no timestamps, byte-reproducible)

inline std::string band_diagram_svg(const std::vector<std::pair<int, BandSet>>& per_level) {
  if (per_level.empty()) throw std::invalid_argument("no levels to draw");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& [level, bands] : per_level)
    for (const Interval& iv : bands.intervals()) {
      lo = std::min(lo, iv.lo);
      hi = std::max(hi, iv.hi);
    }
  if (!(hi > lo)) hi = lo + 1;
  const double width = 800, row_h = 26, left = 60, right = 20, top = 30;
  const double height = top + row_h * static_cast<double>(per_level.size()) + 30;
  auto xmap = [&](double e) { return left + (e - lo) / (hi - lo) * (width - left - right); };
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::format_double(width) +
                    "\" height=\"" + detail::format_double(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < per_level.size(); ++i) {
    const double y = top + row_h * static_cast<double>(i);
    svg += "<text x=\"6\" y=\"" + detail::format_double(y + 13) + "\" font-size=\"12\">level " +
           std::to_string(per_level[i].first) + "</text>\n";
    for (const Interval& iv : per_level[i].second.intervals()) {
      const double x0 = xmap(iv.lo);
      const double x1 = xmap(iv.hi);
      svg += "<rect x=\"" + detail::format_double(x0) + "\" y=\"" + detail::format_double(y + 4) +
             "\" width=\"" + detail::format_double(std::max(0.5, x1 - x0)) +
             "\" height=\"10\" fill=\"#30597e\"/>\n";
    }
  }
  svg += "<line x1=\"" + detail::format_double(left) + "\" y1=\"" + detail::format_double(height - 22) +
         "\" x2=\"" + detail::format_double(width - right) + "\" y2=\"" + detail::format_double(height - 22) +
         "\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + detail::format_double(left) + "\" y=\"" + detail::format_double(height - 8) +
         "\" font-size=\"12\">" + detail::format_double(lo) + "</text>\n";
  svg += "<text x=\"" + detail::format_double(width - right - 40) + "\" y=\"" +
         detail::format_double(height - 8) + "\" font-size=\"12\">" + detail::format_double(hi) + "</text>\n";
  svg += "</svg>\n";
  return svg;
}

inline std::string curves_svg(const std::vector<index_t>& xs,
                              const std::vector<std::pair<std::string, std::vector<double>>>& curves) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& [name, ys] : curves)
    for (double y : ys) {
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
  if (!(hi > lo)) hi = lo + 1;
  const double width = 800, height = 400, left = 70, right = 20, top = 20, bottom = 40;
  auto xmap = [&](std::size_t i) {
    return left + (width - left - right) * static_cast<double>(i) / std::max<std::size_t>(1, xs.size() - 1);
  };
  auto ymap = [&](double y) { return top + (height - top - bottom) * (1.0 - (y - lo) / (hi - lo)); };
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"400\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  static const char* colors[] = {"#30597e", "#a03c3c", "#3c7e46", "#7e6a30", "#5e3c7e", "#3c7e78",
                                 "#7e3c61", "#555555"};
  int color = 0;
  for (const auto& [name, ys] : curves) {
    std::string points;
    for (std::size_t i = 0; i < ys.size(); ++i)
      points += detail::format_double(xmap(i)) + "," + detail::format_double(ymap(ys[i])) + " ";
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(colors[color % 8]) + "\" points=\"" + points +
           "\"/>\n";
    svg += "<text x=\"" + detail::format_double(width - right - 120) + "\" y=\"" +
           detail::format_double(top + 14 * (color + 1)) + "\" font-size=\"11\" fill=\"" +
           std::string(colors[color % 8]) + "\">" + name + "</text>\n";
    ++color;
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    svg += "<text x=\"" + detail::format_double(xmap(i) - 10) + "\" y=\"" + detail::format_double(height - 12) +
           "\" font-size=\"11\">" + std::to_string(xs[i]) + "</text>\n";
  }
  svg += "<text x=\"4\" y=\"" + detail::format_double(ymap(hi) + 4) + "\" font-size=\"11\">" +
         detail::format_double(hi) + "</text>\n";
  svg += "<text x=\"4\" y=\"" + detail::format_double(ymap(lo) + 4) + "\" font-size=\"11\">" +
         detail::format_double(lo) + "</text>\n";
  svg += "</svg>\n";
  return svg;
}

}  // namespace subshift

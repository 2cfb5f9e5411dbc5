/*
 * subshift-spectra: task driver behind the command-line tool: configuration,
 * model resolution and deterministic artifact emission.
 *
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <map>
#include <optional>

#include "subshift/io.hpp"

namespace subshift {

inline constexpr const char* kVersion = "0.1.0";

enum class Task { generate, check_lsc, lyapunov, spectrum, spinal_compare };

inline const char* to_string(Task t) {
  switch (t) {
    case Task::generate: return "generate";
    case Task::check_lsc: return "check-lsc";
    case Task::lyapunov: return "lyapunov";
    case Task::spectrum: return "spectrum";
    case Task::spinal_compare: return "spinal-compare";
  }
  return "?";
}

struct RunConfig {
  Task task = Task::generate;

  // Model source: exactly one of these.
  std::string coding_path;    // simple Toeplitz coding file
  std::string sturmian_spec;  // continued-fraction spec string
  std::string xi_spec;        // spinal xi file path or inline spec
  std::string model_path;     // JSON model file (source + coefficient maps)

  // Scale knobs.
  index_t block_index = std::numeric_limits<index_t>::min();  // generate: print block k
  index_t prefix_len = 0;                                     // generate: print first L letters
  index_t factor_len = 0;                                     // generate: emit factors of this length
  index_t n = 6;                                              // check-lsc: window length
  index_t horizon = 100000;
  int level_lo = 3;
  int level_hi = 6;
  std::vector<double> energies;
  std::vector<index_t> spread_ns = {256, 1024, 4096, 16384};
  int ladder_samples = 16;
  int random_samples = 64;
  index_t truncated = 0;  // spectrum: also emit truncated eigenvalues of this size
  bool isotropic = false;
  std::map<std::string, double> f_map;  // per-letter coefficient overrides
  std::map<std::string, double> g_map;

  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out_dir = "out";

  std::string canonical() const {
    std::string s = std::string("task=") + to_string(task) + ";coding=" + coding_path +
                    ";sturmian=" + sturmian_spec + ";xi=" + xi_spec + ";model=" + model_path;
    s += ";block=" + std::to_string(block_index) + ";prefix=" + std::to_string(prefix_len);
    s += ";factor=" + std::to_string(factor_len) + ";n=" + std::to_string(n);
    s += ";horizon=" + std::to_string(horizon);
    s += ";levels=" + std::to_string(level_lo) + ".." + std::to_string(level_hi);
    s += ";energies=";
    for (double e : energies) s += detail::format_double(e) + ",";
    s += ";ns=";
    for (index_t v : spread_ns) s += std::to_string(v) + ",";
    s += ";samples=" + std::to_string(ladder_samples) + "+" + std::to_string(random_samples);
    s += ";truncated=" + std::to_string(truncated);
    s += std::string(";isotropic=") + (isotropic ? "1" : "0");
    s += ";f=";
    for (const auto& [k, v] : f_map) s += k + "=" + detail::format_double(v) + ",";
    s += ";g=";
    for (const auto& [k, v] : g_map) s += k + "=" + detail::format_double(v) + ",";
    s += ";seed=" + std::to_string(seed);
    return s;
  }
};

namespace detail {

inline std::uint64_t fnv64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace detail

/// A model source resolved into the objects the tasks consume.
struct ResolvedModel {
  std::string kind;  // "toeplitz" | "sturmian" | "spinal"
  Alphabet alphabet;
  std::optional<ToeplitzCoding> coding;  // Toeplitz and spinal models
  std::optional<SturmianCF> cf;
  std::optional<SpinalModel> spinal;

  std::optional<Stream> stream;  // one-sided factor source
  std::vector<std::pair<std::string, PointedBiWord>> leading;
  std::vector<std::vector<Word>> gamma_ladders;  // one per leading word

  std::optional<JacobiCoefficients> jacobi;

  std::vector<PeriodicApproximant> approximants(int lo, int hi) const {
    if (coding) return toeplitz_approximants(*coding, lo, hi);
    return sturmian_approximant_ladder(*cf, lo, hi);
  }
};

inline ResolvedModel resolve_model(const RunConfig& config) {
  int sources = 0;
  for (const std::string* s : {&config.coding_path, &config.sturmian_spec, &config.xi_spec, &config.model_path})
    if (!s->empty()) ++sources;
  if (sources != 1) throw std::invalid_argument("exactly one model source must be given");

  ResolvedModel model;
  model.alphabet = Alphabet::binary01();

  std::map<std::string, double> f_map = config.f_map;
  std::map<std::string, double> g_map = config.g_map;

  std::string coding_path = config.coding_path;
  std::string sturmian_spec = config.sturmian_spec;
  std::string xi_spec = config.xi_spec;

  if (!config.model_path.empty()) {
    std::ifstream in(config.model_path);
    if (!in) throw std::invalid_argument("cannot open model file: " + config.model_path);
    json j = json::parse(in);
    const auto& src = j.at("source");
    const std::string kind = src.at("kind").get<std::string>();
    const std::filesystem::path base = std::filesystem::path(config.model_path).parent_path();
    if (kind == "toeplitz") coding_path = (base / src.at("coding").get<std::string>()).string();
    else if (kind == "sturmian") sturmian_spec = src.at("cf").get<std::string>();
    else if (kind == "spinal") xi_spec = (base / src.at("xi").get<std::string>()).string();
    else throw std::invalid_argument("unknown model source kind: " + kind);
    if (j.contains("f"))
      for (const auto& [k, v] : j.at("f").items()) f_map.emplace(k, v.get<double>());
    if (j.contains("g"))
      for (const auto& [k, v] : j.at("g").items()) g_map.emplace(k, v.get<double>());
  }

  if (!coding_path.empty()) {
    model.kind = "toeplitz";
    model.coding = normalize_coding(load_toeplitz_coding(coding_path));
    model.alphabet = model.coding->alphabet;
    model.stream = limit_word(*model.coding);
    for (const auto& [letter, omega] : leading_words(*model.coding)) {
      model.leading.emplace_back(model.alphabet.name(letter), omega);
      model.gamma_ladders.push_back(three_block_witnesses(*model.coding, letter, 8));
    }
  } else if (!sturmian_spec.empty()) {
    model.kind = "sturmian";
    model.cf = parse_sturmian_spec(sturmian_spec);
    model.alphabet = Alphabet::binary01();
    model.stream = sturmian_stream(*model.cf);
    const SturmianLeading lead = sturmian_leading_words(*model.cf);
    model.leading.emplace_back("even", lead.even_word);
    model.leading.emplace_back("odd", lead.odd_word);
    model.gamma_ladders.push_back(sturmian_gamma_ladder(*model.cf, 0, 8));
    model.gamma_ladders.push_back(sturmian_gamma_ladder(*model.cf, 1, 8));
  } else {
    model.kind = "spinal";
    const bool is_file = std::filesystem::exists(xi_spec);
    model.spinal = is_file ? load_xi_file(xi_spec) : parse_xi_spec(xi_spec);
    if (config.isotropic) model.spinal->weights = SpinalWeights::isotropic(model.spinal->params.m);
    model.coding = spinal_coding(model.spinal->params);
    model.alphabet = model.coding->alphabet;
    model.stream = limit_word(*model.coding);
    for (const auto& [letter, omega] : leading_words(*model.coding)) {
      model.leading.emplace_back(model.alphabet.name(letter), omega);
      model.gamma_ladders.push_back(three_block_witnesses(*model.coding, letter, 8));
    }
  }

  // Jacobi coefficients: spinal models default to the Markov translation,
  // other models to f = 1, g = 0, with per-letter overrides applied on top.
  if (model.kind == "spinal" && f_map.empty() && g_map.empty()) {
    model.jacobi = spinal_to_jacobi(model.spinal->params, model.spinal->weights);
  } else {
    std::vector<double> f_values(static_cast<std::size_t>(model.alphabet.size()), 1.0);
    std::vector<double> g_values(static_cast<std::size_t>(model.alphabet.size()), 0.0);
    for (const auto& [name, value] : f_map) f_values[static_cast<std::size_t>(model.alphabet.letter(name))] = value;
    for (const auto& [name, value] : g_map) g_values[static_cast<std::size_t>(model.alphabet.letter(name))] = value;
    model.jacobi = JacobiCoefficients::per_letter(std::move(f_values), std::move(g_values));
  }
  return model;
}

namespace detail {

template <typename T, typename Fn>
std::vector<T> parallel_map(index_t count, int jobs, Fn&& fn) {
  std::vector<T> out(static_cast<std::size_t>(count));
  if (jobs <= 1 || count <= 1) {
    for (index_t i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = fn(i);
    return out;
  }
  std::vector<std::future<void>> futures;
  std::atomic<index_t> next{0};
  for (int j = 0; j < jobs; ++j)
    futures.push_back(std::async(std::launch::async, [&] {
      for (;;) {
        const index_t i = next.fetch_add(1);
        if (i >= count) return;
        out[static_cast<std::size_t>(i)] = fn(i);
      }
    }));
  for (auto& f : futures) f.get();
  return out;
}

}  // namespace detail

/// Executes the configured task, writing deterministic artifacts (CSV, JSON,
/// SVG) and a manifest under the output directory. Returns the process exit
/// status: 0 ok (numerical warnings go to the manifest), 1 config error,
/// 2 internal invariant violation.
inline int run(const RunConfig& config_in) {
  RunConfig config = config_in;
  if (const char* env = std::getenv("SUBSHIFT_OUT")) config.out_dir = env;
  std::vector<std::string> warnings;
  json manifest;
  manifest["version"] = kVersion;
  manifest["task"] = to_string(config.task);
  manifest["config"] = config.canonical();
  manifest["config_hash"] = detail::hex64(detail::fnv64(config.canonical()));

  try {
    if (config.horizon <= 0 || config.level_hi < config.level_lo || config.jobs < 1)
      throw std::invalid_argument("scale knobs must be positive and ordered");
    std::filesystem::create_directories(config.out_dir);
    const auto path = [&](const std::string& name) {
      return (std::filesystem::path(config.out_dir) / name).string();
    };
    ResolvedModel model = resolve_model(config);
    const Alphabet& alphabet = model.alphabet;

    switch (config.task) {
      case Task::generate: {
        std::string text;
        if (config.block_index != std::numeric_limits<index_t>::min()) {
          Word block;
          if (model.coding) block = toeplitz_block(*model.coding, config.block_index);
          else block = sturmian_word(*model.cf, config.block_index);
          text += to_string(block, alphabet) + "\n";
          std::cout << to_string(block, alphabet) << "\n";
          std::cout << "length " << block.size() << "\n";
        }
        if (config.prefix_len > 0) {
          const Word prefix = model.stream->prefix(config.prefix_len);
          text += to_string(prefix, alphabet) + "\n";
          std::cout << to_string(prefix, alphabet) << "\n";
        }
        for (const auto& [name, omega] : model.leading) {
          const std::string line = name + ": " + to_string(omega, alphabet, -8, 8);
          text += line + "\n";
          std::cout << line << "\n";
        }
        write_file(path("generate.txt"), text);
        if (config.factor_len > 0) {
          const auto factors = factors_of_length(*model.stream, config.factor_len, config.horizon);
          write_file(path("factors.csv"), factors_csv(factors, alphabet));
        }
        break;
      }

      case Task::check_lsc: {
        std::vector<PointedBiWord> leading;
        for (const auto& [name, omega] : model.leading) leading.push_back(omega);
        const AlphaReport alpha = check_alpha(leading, *model.stream, config.n, config.horizon);
        write_file(path("alpha.json"), to_json(alpha, alphabet).dump(2) + "\n");

        // (PQ) along block/word prefixes with a geometric scale ladder.
        std::vector<index_t> ladder;
        for (index_t L = 8; L <= config.horizon; L *= 2) ladder.push_back(L);
        json pq_all = json::array();
        bool pq_ok = true;
        for (int k = 0;; ++k) {
          Word v;
          if (model.coding) {
            if (toeplitz_block_length(*model.coding, k) > config.horizon / 2) break;
            v = toeplitz_block(*model.coding, k);
          } else {
            if (k < 1) continue;
            if (k > 40 || sturmian_length(*model.cf, k) > config.horizon / 2) break;
            v = sturmian_word(*model.cf, k);
          }
          if (v.empty()) continue;
          const PqReport r = pq_profile(*model.stream, v, ladder);
          pq_ok = pq_ok && r.holds_at_scale;
          pq_all.push_back(to_json(r, alphabet));
        }
        write_file(path("pq.json"), pq_all.dump(2) + "\n");

        json gamma_all = json::array();
        bool gamma_ok = true;
        for (std::size_t j = 0; j < model.leading.size(); ++j) {
          const auto witnesses = gamma_prime_witnesses(model.leading[j].second, model.gamma_ladders[j]);
          gamma_ok = gamma_ok && !witnesses.empty();
          json entry = to_json(witnesses, alphabet);
          entry["leading_word"] = model.leading[j].first;
          gamma_all.push_back(std::move(entry));
        }
        write_file(path("gamma.json"), gamma_all.dump(2) + "\n");

        std::cout << "alpha: " << (alpha.holds_at_scale ? "holds-at-scale" : "fails-at-scale") << " (n=" << config.n
                  << ", factors=" << alpha.factor_count << ")\n";
        std::cout << "pq: " << (pq_ok ? "holds-at-scale" : "fails-at-scale") << "\n";
        std::cout << "gamma': " << (gamma_ok ? "holds-at-scale" : "fails-at-scale") << "\n";
        if (!alpha.holds_at_scale || !pq_ok || !gamma_ok) warnings.push_back("a condition failed at scale");
        break;
      }

      case Task::lyapunov: {
        std::vector<double> energies = config.energies;
        if (energies.empty()) {
          const double R = energy_bound(*model.jacobi);
          for (int i = 0; i < 8; ++i) energies.push_back(R * (i + 0.5) / 8.0);
        }
        std::vector<PointedBiWord> leading;
        for (const auto& [name, omega] : model.leading) leading.push_back(omega);
        const auto samples = make_spread_samples(leading, config.ladder_samples, config.random_samples,
                                                 1000000, config.seed);
        const auto per_energy = detail::parallel_map<std::pair<double, std::vector<SpreadResult>>>(
            static_cast<index_t>(energies.size()), config.jobs, [&](index_t i) {
              const LocallyConstantCocycle A = jacobi_cocycle(*model.jacobi, energies[static_cast<std::size_t>(i)]);
              return std::make_pair(energies[static_cast<std::size_t>(i)],
                                    uniformity_spread_profile(A, samples, config.spread_ns));
            });
        write_file(path("spread.csv"), spread_csv(config.spread_ns, per_energy));
        std::vector<std::pair<std::string, std::vector<double>>> curves;
        for (const auto& [E, results] : per_energy) {
          std::vector<double> ys;
          for (const auto& r : results) ys.push_back(r.spread);
          curves.emplace_back("E=" + detail::format_double(E), ys);
        }
        write_file(path("spread.svg"), curves_svg(config.spread_ns, curves));
        for (const auto& [E, results] : per_energy)
          std::cout << "E=" << E << " spread(n=" << config.spread_ns.back()
                    << ") = " << results.back().spread << "\n";
        break;
      }

      case Task::spectrum: {
        if (model.kind == "spinal") {
          std::vector<std::pair<int, std::vector<double>>> eigen_per_level;
          json containment = json::array();
          const BandSet iso = isotropic_interval(model.spinal->params.m);
          for (int n = std::max(1, config.level_lo); n <= config.level_hi; ++n) {
            const SchreierGraph g = schreier_graph(model.spinal->params, n);
            const MarkovMatrix M = markov_matrix(g, model.spinal->params, model.spinal->weights);
            auto eigen = M.eigenvalues();
            if (config.isotropic) {
              double worst = 0.0;
              for (double x : eigen) worst = std::max(worst, iso.distance(x));
              containment.push_back({{"level", n},
                                     {"max_distance", worst},
                                     {"hausdorff", hausdorff_distance(eigen, iso)},
                                     {"contained_1e-8", worst <= 1e-8}});
            }
            eigen_per_level.emplace_back(n, std::move(eigen));
          }
          write_file(path("eigenvalues.csv"), eigenvalues_csv(eigen_per_level));
          if (config.isotropic) write_file(path("containment.json"), containment.dump(2) + "\n");
        }
        const auto ladder = model.approximants(config.level_lo, config.level_hi);
        const auto bands_per_level = detail::parallel_map<std::pair<int, BandSet>>(
            static_cast<index_t>(ladder.size()), config.jobs, [&](index_t i) {
              const auto& ap = ladder[static_cast<std::size_t>(i)];
              return std::make_pair(ap.level, periodic_bands(*model.jacobi, ap.period));
            });
        const CantorProfile profile = cantor_profile(*model.jacobi, ladder);
        write_file(path("bands.csv"), bands_csv(bands_per_level));
        write_file(path("bands.svg"), band_diagram_svg(bands_per_level));
        write_file(path("measures.csv"), measures_csv(profile));
        write_file(path("cantor.json"), to_json(profile).dump(2) + "\n");
        if (config.truncated > 0) {
          std::vector<std::pair<int, std::vector<double>>> truncated;
          const PointedBiWord omega = model.leading.front().second;
          truncated.emplace_back(0, truncated_spectrum(*model.jacobi, omega, config.truncated));
          write_file(path("truncated.csv"), eigenvalues_csv(truncated));
        }
        for (const auto& row : profile.rows)
          std::cout << "level " << row.level << ": bands=" << row.band_count << " measure=" << row.measure
                    << "\n";
        std::cout << "verdict: " << profile.verdict << "\n";
        break;
      }

      case Task::spinal_compare: {
        if (model.kind != "spinal") throw std::invalid_argument("spinal-compare needs a spinal model");
        json report;
        json words = json::array();
        bool all_equal = true;
        for (int n = 1; n <= std::min(config.level_hi, 12); ++n) {
          const SchreierGraph g = schreier_graph(model.spinal->params, n);
          const Word graph_word = read_schreier_word(g);
          const Word recursion = spinal_recursion_word(model.spinal->params, n - 1);
          const bool equal = graph_word == recursion;
          all_equal = all_equal && equal;
          const MarkovMatrix M = markov_matrix(g, model.spinal->params, model.spinal->weights);
          const BoundaryDiscrepancy disc = markov_vs_jacobi(M, g, model.spinal->params, model.spinal->weights);
          words.push_back({{"level", n},
                           {"word_matches_recursion", equal},
                           {"markov_rows_differing", disc.rows_differing},
                           {"markov_max_abs_difference", disc.max_abs}});
        }
        report["levels"] = std::move(words);
        report["all_words_equal"] = all_equal;
        write_file(path("compare.json"), report.dump(2) + "\n");
        for (int n = 1; n <= std::min(config.level_hi, 5); ++n)
          write_file(path("schreier_" + std::to_string(n) + ".dot"),
                     schreier_dot(schreier_graph(model.spinal->params, n), model.spinal->params,
                                  model.spinal->weights));
        std::cout << "word recursion matches Schreier graphs: " << (all_equal ? "yes" : "NO") << "\n";
        if (!all_equal) warnings.push_back("word recursion mismatch");
        break;
      }
    }

    manifest["warnings"] = warnings;
    write_file((std::filesystem::path(config.out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace subshift

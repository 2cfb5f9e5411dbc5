/*
 * subshift-spectra: command-line driver.
 *
 * SPDX-License-Identifier: MIT
 */
#include <CLI11.hpp>

#include "subshift/cli.hpp"

namespace {

void add_common(CLI::App* cmd, subshift::RunConfig& config) {
  cmd->add_option("--coding", config.coding_path, "simple Toeplitz coding file");
  cmd->add_option("--sturmian", config.sturmian_spec, "continued fraction, e.g. 1;repeat:1");
  cmd->add_option("--spinal", config.xi_spec, "spinal xi file or inline spec");
  cmd->add_option("--model", config.model_path, "JSON model file (source + coefficient maps)");
  cmd->add_option("--out", config.out_dir, "output directory (env SUBSHIFT_OUT overrides)");
  cmd->add_option("--seed", config.seed, "seed for sampling-based diagnostics");
  cmd->add_option("--jobs", config.jobs, "worker threads for parallel scans")->check(CLI::PositiveNumber);
  cmd->add_option("--horizon", config.horizon, "observation horizon for infinite objects");
}

struct CoefficientSpecs {
  std::vector<std::string> f;
  std::vector<std::string> g;
};

void add_coefficients(CLI::App* cmd, subshift::RunConfig& config, CoefficientSpecs& specs) {
  cmd->add_option("--f", specs.f, "off-diagonal values per letter, e.g. --f a=1 b=0.5");
  cmd->add_option("--g", specs.g, "diagonal values per letter");
  cmd->add_flag("--isotropic", config.isotropic, "use isotropic spinal weights");
}

bool parse_letter_map(const std::vector<std::string>& specs, std::map<std::string, double>& out) {
  for (const std::string& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) return false;
    try {
      out[spec.substr(0, eq)] = std::stod(spec.substr(eq + 1));
    } catch (const std::exception&) {
      return false;
    }
  }
  return true;
}

std::pair<int, int> parse_levels(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const int k = std::stoi(text);
    return {k, k};
  }
  return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subshift-spectra: Toeplitz/Sturmian/spinal subshifts, cocycles and Jacobi spectra"};
  app.require_subcommand(1);

  subshift::RunConfig config;
  CoefficientSpecs specs;
  std::string levels;

  auto* generate = app.add_subcommand("generate", "emit blocks, limit-word prefixes and leading words");
  add_common(generate, config);
  generate->add_option("--block", config.block_index, "block (or s_n) index to print");
  generate->add_option("--prefix", config.prefix_len, "limit-word prefix length to print");
  generate->add_option("--factors", config.factor_len, "emit all factors of this length as CSV");

  auto* check = app.add_subcommand("check-lsc", "alpha coverage, (PQ) densities and gamma' witnesses");
  add_common(check, config);
  check->add_option("--n", config.n, "window length for the alpha check");

  auto* lyap = app.add_subcommand("lyapunov", "Lyapunov estimates and uniformity spreads");
  add_common(lyap, config);
  add_coefficients(lyap, config, specs);
  lyap->add_option("--energies", config.energies, "energies to scan");
  lyap->add_option("--ns", config.spread_ns, "cocycle lengths for the spread profile");
  lyap->add_option("--ladder-samples", config.ladder_samples, "leading-word shift samples");
  lyap->add_option("--random-samples", config.random_samples, "random shift samples");

  auto* spectrum = app.add_subcommand("spectrum", "periodic-approximant band sets and eigenvalues");
  add_common(spectrum, config);
  add_coefficients(spectrum, config, specs);
  spectrum->add_option("--levels", levels, "approximant levels, e.g. 3..8");
  spectrum->add_option("--truncated", config.truncated, "also emit a truncated spectrum of this size");

  auto* compare = app.add_subcommand("spinal-compare", "Schreier-word and Markov/Jacobi cross-checks");
  add_common(compare, config);
  add_coefficients(compare, config, specs);
  compare->add_option("--levels", levels, "levels to compare, e.g. 1..12");

  CLI11_PARSE(app, argc, argv);

  if (generate->parsed()) config.task = subshift::Task::generate;
  if (check->parsed()) config.task = subshift::Task::check_lsc;
  if (lyap->parsed()) config.task = subshift::Task::lyapunov;
  if (spectrum->parsed()) config.task = subshift::Task::spectrum;
  if (compare->parsed()) config.task = subshift::Task::spinal_compare;
  if (!parse_letter_map(specs.f, config.f_map) || !parse_letter_map(specs.g, config.g_map)) {
    std::cerr << "config error: coefficient options must look like --f a=1 b=0.5\n";
    return 1;
  }
  if (!levels.empty()) {
    try {
      std::tie(config.level_lo, config.level_hi) = parse_levels(levels);
    } catch (const std::exception&) {
      std::cerr << "config error: bad --levels value: " << levels << "\n";
      return 1;
    }
  }
  return subshift::run(config);
}

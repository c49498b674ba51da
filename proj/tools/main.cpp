#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "scenarios.hpp"

using namespace rnls::cli;

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool validate_only = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool config_required) {
  auto* opt = cmd->add_option("--config", f.config, "INI experiment config");
  if (config_required) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "output directory (overrides output.dir)");
  cmd->add_option("--seed", f.seed, "master RNG seed (overrides seed)");
  cmd->add_option("--threads", f.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
  cmd->add_flag("--validate-only", f.validate_only, "check the config and exit");
}

void apply(const CommonFlags& f, ExperimentConfig& c) {
  if (!f.out.empty()) c.out_dir = f.out;
  if (f.seed) c.seed = *f.seed;
  if (f.threads) c.threads = *f.threads;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rnls: rotating NLS in a harmonic trap"};
  app.require_subcommand(1);

  struct Sub {
    Scenario scenario;
    CLI::App* cmd;
  };
  CommonFlags flags;
  std::vector<Sub> subs;
  const std::pair<Scenario, const char*> descriptions[] = {
      {Scenario::q_reference, "radial ground state Q, GN constant and thresholds"},
      {Scenario::spectrum, "lowest eigenpair of the trapped rotating operator"},
      {Scenario::groundstate, "Nehari or local-minimizer ground state with certification"},
      {Scenario::evolve, "split-step evolution with diagnostics"},
      {Scenario::classify, "K+/K-/negative-energy classification of initial data"},
      {Scenario::stability, "perturbation experiment around a ground state"},
      {Scenario::sweep, "local minimizers over a list of masses"},
      {Scenario::ls1_trend, "rescaled potential term along increasing omega"},
  };
  int q_dim = 2;
  double q_p = 5.0;
  std::optional<double> q_tol;
  std::string q_cache;
  for (auto [s, text] : descriptions) {
    auto* cmd = app.add_subcommand(to_string(s), text);
    add_common(cmd, flags, s != Scenario::q_reference);
    if (s == Scenario::q_reference) {
      cmd->add_option("--n", q_dim, "space dimension")->check(CLI::IsMember({2, 3}));
      cmd->add_option("--p", q_p, "nonlinearity exponent");
      cmd->add_option("--tol", q_tol, "shooting tolerance");
      cmd->add_option("--cache", q_cache, "profile cache directory");
    }
    subs.push_back({s, cmd});
  }
  auto* validate_cmd = app.add_subcommand("validate", "static validation of a config file");
  std::string validate_path;
  validate_cmd->add_option("--config", validate_path)->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_cmd->parsed()) {
      const ExperimentConfig c = load_config(validate_path);
      return report_validation(c, std::cout);
    }
    for (const auto& sub : subs) {
      if (!sub.cmd->parsed()) continue;
      ExperimentConfig c;
      if (!flags.config.empty()) {
        c = load_config(flags.config, sub.scenario);
      } else {
        std::istringstream empty;
        c = parse_config(empty, sub.scenario);
      }
      if (sub.scenario == Scenario::q_reference) {
        if (flags.config.empty() || sub.cmd->count("--n")) {
          c.grid.dim = q_dim;
          c.physics.dim = q_dim;
        }
        if (flags.config.empty() || sub.cmd->count("--p")) c.physics.p = q_p;
        if (q_tol) c.reference.tol = *q_tol;
        if (!q_cache.empty()) c.reference.cache_dir = q_cache;
      }
      apply(flags, c);
      if (flags.validate_only) return report_validation(c, std::cout);
      if (int v = report_validation(c, std::cerr); v != kOk) return v;
      return run(c, std::cerr);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}

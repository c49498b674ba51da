#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rnls/grid.hpp"
#include "rnls/params.hpp"

namespace rnls::cli {

enum class Scenario { q_reference, spectrum, groundstate, evolve, classify, stability, sweep, ls1_trend };
std::string to_string(Scenario s);
std::optional<Scenario> parse_scenario(std::string_view name);

/// A malformed or inconsistent configuration. `key()` is the dotted path of
/// the offending entry, e.g. "evolve.dt".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct GridSpec {
  int dim = 2;
  std::vector<double> half_width{8.0};
  std::vector<std::size_t> points{128};
  /// A single entry applies to every axis.
  GridPtr make() const;
};

struct InitialSpec {
  std::string kind = "gaussian";  // gaussian | vortex | snapshot
  double amplitude = 0.5641895835477563;
  double width = 1.0;
  int charge = 1;
  std::vector<double> center{0.0, 0.0, 0.0};
  std::filesystem::path path;
};

struct EvolveSpec {
  double dt = 1e-3;
  double horizon = 1.0;
  int sample_every = 10;
  double growth_factor = 50.0;
  double tail_threshold = 0.01;
  bool dt_shrink = false;
  int snapshot_every = 0;  // samples between RNLS1 snapshots, 0 = final only
};

struct SolverSpec {
  double tol = 1e-9;
  int max_iterations = 2000;
  /// Seeded random modulation of the initial guess.
  bool perturb = false;
  std::string source = "nehari";  // nehari | local
  double omega = 1.0;
  double q = 0.0;
  double r = 1.0;
  std::vector<double> q_list;
  std::vector<double> omega_list;
  double rescaled_half_width = 6.0;
};

struct ReferenceSpec {
  double tol = 1e-10;
  std::filesystem::path cache_dir = ".rnls_cache";
};

struct ClassifySpec {
  std::string l_mode = "auto";  // auto | isotropic_exact | trajectory_min | smalldata_bound
  bool evolve = false;
};

struct StabilitySpec {
  std::string kind = "random";
  std::vector<double> deltas{1e-2, 3e-3, 1e-3};
  double horizon = 5.0;
  int scaling_sign = 1;
  double epsilon_factor = 10.0;
  double linear_spread = 3.0;
};

struct ExperimentConfig {
  Scenario scenario = Scenario::evolve;
  GridSpec grid;
  PhysicsParams physics;
  SolverSpec solver;
  ReferenceSpec reference;
  InitialSpec initial;
  EvolveSpec evolve;
  ClassifySpec classify;
  StabilitySpec stability;
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 1;
  int threads = 1;
  std::string source_text;  // verbatim config file, echoed into the manifest
};

/// Parses INI text. The `scenario` key is optional when `expected` is given
/// and must agree with it otherwise. Throws ConfigError.
ExperimentConfig parse_config(std::istream& in, std::optional<Scenario> expected = std::nullopt);
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<Scenario> expected = std::nullopt);

/// Static checks without running anything; each entry is "key: message".
std::vector<std::string> validate(const ExperimentConfig& config);

}  // namespace rnls::cli

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pfreq/background.hpp"
#include "pfreq/evolution.hpp"
#include "pfreq/frequency.hpp"
#include "pfreq/verifiers.hpp"

namespace pfreq {

/// Invalid scenario configuration; field() names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Seeded random superposition of modes below a spectral cutoff.
struct RandomMixture {
  double mu_cutoff = 2.0;
  int terms = 3;
};

struct ForcingSpec {
  /// Either a constant (times empty) or samples of a piecewise-linear profile.
  double constant = 0.0;
  std::vector<double> times;
  std::vector<double> values;
  /// Empty means ScalarOnU; otherwise a square ModeMatrix in term order.
  std::vector<std::vector<double>> matrix;

  Forcing build() const;
};

struct ScenarioConfig {
  std::string id;
  Background background = Background::plane(1);
  std::vector<std::pair<std::vector<int>, double>> initial_modes;
  std::optional<RandomMixture> random_mixture;
  double a = -1.0;
  double b = -0.1;
  int nodes = 50;
  std::optional<double> kappa;
  std::optional<ForcingSpec> forcing;
  int resolution = 24;
  std::vector<std::string> checks;
  std::map<std::string, double> tolerances;
  std::vector<std::string> report_only;
  std::uint64_t seed = 0;

  double kappa_used() const { return kappa ? *kappa : pfreq::kappa(background); }
};

/// Draws mixture.terms distinct modes with mu <= mu_cutoff (skipping those in
/// exclude) and amplitudes of magnitude in [0.5, 1.5] with random signs.
/// Uses only raw mt19937_64 output, so results are identical across platforms.
std::vector<std::pair<std::vector<int>, double>> random_mixture_entries(
    const Background& bg, const RandomMixture& mixture, std::uint64_t seed,
    const std::vector<std::vector<int>>& exclude = {});

/// The t = a field described by the config (explicit plus random modes).
CoefficientField initial_field(const ScenarioConfig& config);

/// Every check name understood by run_scenario, in canonical order.
const std::vector<std::string>& known_checks();
double default_tolerance(const std::string& check);

/// Parses and validates a JSON scenario document. Throws ConfigError.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Normalized, key-sorted, whitespace-free serialization of a config.
std::string canonical_json(const ScenarioConfig& config);
/// Hex SHA-256 of canonical_json.
std::string config_hash(const ScenarioConfig& config);

struct Provenance {
  std::string config_hash;
  std::string tool_version;
  int resolution = 0;

  bool operator==(const Provenance&) const = default;
};

struct RunOutput {
  std::string scenario_id;
  std::string background;
  double kappa = 0.0;
  FrequencyTrace trace;
  std::vector<VerificationReport> reports;
  Provenance provenance;
};

/// Builds the initial field, evolves it and runs every requested check.
/// Deterministic for a fixed config and resolution.
RunOutput run_scenario(const ScenarioConfig& config, std::optional<int> resolution_override = std::nullopt);

const char* tool_version();

/// A scenario config compiled into the library for the paper suite.
struct PackagedScenario {
  const char* name;
  const char* json;
};

const std::vector<PackagedScenario>& packaged_scenarios();

}  // namespace pfreq

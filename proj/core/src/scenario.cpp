#include "pfreq/scenario.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pfreq/error.hpp"

#ifndef PFREQ_VERSION
#define PFREQ_VERSION "0.0.0"
#endif

namespace pfreq {

using nlohmann::json;

namespace {

const std::set<std::string> kTopLevelKeys = {"id",     "background", "initial_modes", "random_mixture",
                                             "time",   "kappa",      "forcing",       "resolution",
                                             "checks", "tolerances", "report_only",   "seed"};

const std::vector<std::string> kDefaultReportOnly = {"drift_bochner_verbatim", "harnack_printed"};

const json& require(const json& obj, const std::string& key, const std::string& field) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError(field + "." + key, "missing");
  return obj.at(key);
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(field, "must be finite");
  return x;
}

int integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
  return v.get<int>();
}

std::vector<double> number_list(const json& v, const std::string& field) {
  if (!v.is_array()) throw ConfigError(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], fmt::format("{}[{}]", field, i)));
  return out;
}

std::vector<std::string> string_list(const json& v, const std::string& field) {
  if (!v.is_array()) throw ConfigError(field, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) throw ConfigError(fmt::format("{}[{}]", field, i), "expected a string");
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

Background parse_background(const json& j) {
  if (!j.is_object()) throw ConfigError("background", "expected an object");
  const json& kind_json = require(j, "kind", "background");
  if (!kind_json.is_string()) throw ConfigError("background.kind", "expected a string");
  const std::string kind = kind_json.get<std::string>();
  try {
    if (kind == "plane") return Background::plane(integer(require(j, "n", "background"), "background.n"));
    if (kind == "sphere") return Background::sphere(integer(require(j, "n", "background"), "background.n"));
    if (kind == "cylinder")
      return Background::cylinder(integer(require(j, "k", "background"), "background.k"),
                                  integer(require(j, "m", "background"), "background.m"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("background", e.what());
  }
  throw ConfigError("background.kind", "unknown kind '" + kind + "' (plane, sphere, cylinder)");
}

json background_json(const Background& bg) {
  return std::visit(
      [](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Plane>) return {{"kind", "plane"}, {"n", k.n}};
        if constexpr (std::is_same_v<K, Sphere>) return {{"kind", "sphere"}, {"n", k.n}};
        if constexpr (std::is_same_v<K, Cylinder>) return {{"kind", "cylinder"}, {"k", k.k}, {"m", k.m}};
      },
      bg.kind());
}

ForcingSpec parse_forcing(const json& j) {
  if (!j.is_object()) throw ConfigError("forcing", "expected an object");
  for (const auto& [key, _] : j.items())
    if (key != "c" && key != "coupling") throw ConfigError("forcing." + key, "unknown field");
  ForcingSpec spec;
  const json& c = require(j, "c", "forcing");
  if (c.is_number()) {
    spec.constant = number(c, "forcing.c");
  } else if (c.is_object()) {
    spec.times = number_list(require(c, "times", "forcing.c"), "forcing.c.times");
    spec.values = number_list(require(c, "values", "forcing.c"), "forcing.c.values");
  } else {
    throw ConfigError("forcing.c", "expected a number or {times, values}");
  }
  const json coupling = j.value("coupling", json("scalar"));
  if (coupling.is_string()) {
    if (coupling.get<std::string>() != "scalar") throw ConfigError("forcing.coupling", "expected \"scalar\" or {matrix}");
  } else if (coupling.is_object()) {
    const json& m = require(coupling, "matrix", "forcing.coupling");
    if (!m.is_array() || m.empty()) throw ConfigError("forcing.coupling.matrix", "expected a nonempty array of rows");
    for (std::size_t r = 0; r < m.size(); ++r)
      spec.matrix.push_back(number_list(m[r], fmt::format("forcing.coupling.matrix[{}]", r)));
  } else {
    throw ConfigError("forcing.coupling", "expected \"scalar\" or {matrix}");
  }
  return spec;
}

json forcing_json(const ForcingSpec& f) {
  json j;
  if (f.times.empty())
    j["c"] = f.constant;
  else
    j["c"] = {{"times", f.times}, {"values", f.values}};
  if (f.matrix.empty())
    j["coupling"] = "scalar";
  else
    j["coupling"] = {{"matrix", f.matrix}};
  return j;
}

// Canonical order of checks that share one computation.
std::vector<std::string> canonical_checks(const std::vector<std::string>& requested) {
  std::vector<std::string> out;
  for (const auto& name : known_checks())
    if (std::find(requested.begin(), requested.end(), name) != requested.end()) out.push_back(name);
  return out;
}

json config_to_json(const ScenarioConfig& c) {
  json j;
  j["id"] = c.id;
  j["background"] = background_json(c.background);
  auto modes = c.initial_modes;
  std::sort(modes.begin(), modes.end());
  json m = json::array();
  for (const auto& [idx, amp] : modes) m.push_back({{"index", idx}, {"amplitude", amp}});
  j["initial_modes"] = m;
  if (c.random_mixture) j["random_mixture"] = {{"mu_cutoff", c.random_mixture->mu_cutoff}, {"terms", c.random_mixture->terms}};
  j["time"] = {{"a", c.a}, {"b", c.b}, {"nodes", c.nodes}};
  j["kappa"] = c.kappa_used();
  if (c.forcing) j["forcing"] = forcing_json(*c.forcing);
  j["resolution"] = c.resolution;
  j["checks"] = canonical_checks(c.checks);
  json tol = json::object();
  for (const auto& name : canonical_checks(c.checks)) {
    auto it = c.tolerances.find(name);
    tol[name] = it != c.tolerances.end() ? it->second : default_tolerance(name);
  }
  j["tolerances"] = tol;
  auto ro = c.report_only;
  std::sort(ro.begin(), ro.end());
  ro.erase(std::unique(ro.begin(), ro.end()), ro.end());
  j["report_only"] = ro;
  j["seed"] = c.seed;
  return j;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("SHA-256 digest failed");
  }
  EVP_MD_CTX_free(ctx);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

Forcing ForcingSpec::build() const {
  Forcing f;
  f.c_profile = times.empty() ? CProfile::constant(constant) : CProfile::piecewise_linear(times, values);
  if (matrix.empty()) {
    f.coupling = ScalarOnU{};
  } else {
    const auto n = static_cast<Eigen::Index>(matrix.size());
    Eigen::MatrixXd w(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      if (static_cast<Eigen::Index>(matrix[r].size()) != n)
        throw std::invalid_argument("coupling matrix must be square");
      for (Eigen::Index c = 0; c < n; ++c) w(r, c) = matrix[r][c];
    }
    f.coupling = ModeMatrix{w};
  }
  return f;
}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {
      "frequency_monotonicity", "equality_case",        "harnack",        "harnack_printed",
      "weighted_monotonicity",  "drift_bochner",        "drift_bochner_verbatim",
      "general_bounds",         "general_harnack",      "eigenvalue_monotonicity",
      "selfsimilar_scaling",    "mass_consistency",
  };
  return names;
}

double default_tolerance(const std::string& check) {
  static const std::map<std::string, double> tol = {
      {"frequency_monotonicity", 1e-9}, {"equality_case", 1e-12},  {"harnack", 1e-10},
      {"harnack_printed", 1e-10},       {"weighted_monotonicity", 1e-7}, {"drift_bochner", 1e-8},
      {"drift_bochner_verbatim", 1e-8}, {"general_bounds", 1e-6},  {"general_harnack", 1e-9},
      {"eigenvalue_monotonicity", 1e-12}, {"selfsimilar_scaling", 1e-10}, {"mass_consistency", 1e-8},
  };
  auto it = tol.find(check);
  if (it == tol.end()) throw std::invalid_argument("unknown check '" + check + "'");
  return it->second;
}

std::vector<std::pair<std::vector<int>, double>> random_mixture_entries(const Background& bg,
                                                                        const RandomMixture& mixture,
                                                                        std::uint64_t seed,
                                                                        const std::vector<std::vector<int>>& exclude) {
  std::vector<Mode> pool;
  for (auto& m : enumerate_modes(bg, mixture.mu_cutoff))
    if (std::find(exclude.begin(), exclude.end(), m.index) == exclude.end()) pool.push_back(std::move(m));
  if (mixture.terms < 0 || static_cast<std::size_t>(mixture.terms) > pool.size())
    throw std::invalid_argument(
        fmt::format("random mixture asks for {} modes but only {} lie below mu = {}", mixture.terms, pool.size(),
                    mixture.mu_cutoff));
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < static_cast<std::size_t>(mixture.terms); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<std::pair<std::vector<int>, double>> out;
  for (int i = 0; i < mixture.terms; ++i) {
    const double magnitude = 0.5 + unit_uniform(rng);
    const double sign = (rng() & 1u) ? 1.0 : -1.0;
    out.emplace_back(pool[static_cast<std::size_t>(i)].index, sign * magnitude);
  }
  return out;
}

CoefficientField initial_field(const ScenarioConfig& config) {
  auto entries = config.initial_modes;
  if (config.random_mixture) {
    std::vector<std::vector<int>> taken;
    for (const auto& e : entries) taken.push_back(e.first);
    for (auto& e : random_mixture_entries(config.background, *config.random_mixture, config.seed, taken))
      entries.push_back(std::move(e));
  }
  return CoefficientField::from_indices(config.background, config.a, entries);
}

ScenarioConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("document", e.what());
  }
  if (!j.is_object()) throw ConfigError("document", "expected a JSON object");
  for (const auto& [key, _] : j.items())
    if (!kTopLevelKeys.count(key)) throw ConfigError(key, "unknown field");

  ScenarioConfig c;
  const json& id = require(j, "id", "document");
  if (!id.is_string() || id.get<std::string>().empty()) throw ConfigError("id", "expected a nonempty string");
  c.id = id.get<std::string>();
  if (c.id.find_first_of("/\\") != std::string::npos || c.id.front() == '.')
    throw ConfigError("id", "must be usable as a file name");
  c.background = parse_background(require(j, "background", "document"));

  if (j.contains("initial_modes")) {
    const json& modes = j.at("initial_modes");
    if (!modes.is_array()) throw ConfigError("initial_modes", "expected an array");
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const std::string field = fmt::format("initial_modes[{}]", i);
      const json& idx = require(modes[i], "index", field);
      if (!idx.is_array()) throw ConfigError(field + ".index", "expected an array of integers");
      std::vector<int> index;
      for (std::size_t k = 0; k < idx.size(); ++k) index.push_back(integer(idx[k], fmt::format("{}.index[{}]", field, k)));
      const double amp = number(require(modes[i], "amplitude", field), field + ".amplitude");
      try {
        make_mode(c.background, index);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(field + ".index", e.what());
      }
      c.initial_modes.emplace_back(std::move(index), amp);
    }
  }
  if (j.contains("random_mixture")) {
    const json& r = j.at("random_mixture");
    RandomMixture m;
    m.mu_cutoff = number(require(r, "mu_cutoff", "random_mixture"), "random_mixture.mu_cutoff");
    m.terms = integer(require(r, "terms", "random_mixture"), "random_mixture.terms");
    if (m.terms < 1) throw ConfigError("random_mixture.terms", "must be at least 1");
    c.random_mixture = m;
  }

  const json& time = require(j, "time", "document");
  c.a = number(require(time, "a", "time"), "time.a");
  c.b = number(require(time, "b", "time"), "time.b");
  c.nodes = integer(require(time, "nodes", "time"), "time.nodes");
  if (!(c.a < c.b)) throw ConfigError("time", "need a < b");
  if (!(c.b < 0.0)) throw ConfigError("time.b", "must be negative");
  if (c.nodes < 3) throw ConfigError("time.nodes", "need at least 3 nodes");

  if (j.contains("kappa")) {
    c.kappa = number(j.at("kappa"), "kappa");
    if (*c.kappa < 0.0) throw ConfigError("kappa", "must be nonnegative");
  }
  if (j.contains("forcing")) c.forcing = parse_forcing(j.at("forcing"));
  if (j.contains("resolution")) {
    c.resolution = integer(j.at("resolution"), "resolution");
    if (c.resolution < 2) throw ConfigError("resolution", "must be at least 2");
  }
  c.checks = j.contains("checks") ? string_list(j.at("checks"), "checks") : known_checks();
  for (std::size_t i = 0; i < c.checks.size(); ++i)
    if (std::find(known_checks().begin(), known_checks().end(), c.checks[i]) == known_checks().end())
      throw ConfigError(fmt::format("checks[{}]", i), "unknown check '" + c.checks[i] + "'");
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) throw ConfigError("tolerances", "expected an object");
    for (const auto& [name, v] : t.items()) {
      if (std::find(known_checks().begin(), known_checks().end(), name) == known_checks().end())
        throw ConfigError("tolerances." + name, "unknown check");
      const double tol = number(v, "tolerances." + name);
      if (!(tol >= 0.0)) throw ConfigError("tolerances." + name, "must be nonnegative");
      c.tolerances[name] = tol;
    }
  }
  c.report_only = j.contains("report_only") ? string_list(j.at("report_only"), "report_only") : kDefaultReportOnly;
  for (std::size_t i = 0; i < c.report_only.size(); ++i)
    if (std::find(known_checks().begin(), known_checks().end(), c.report_only[i]) == known_checks().end())
      throw ConfigError(fmt::format("report_only[{}]", i), "unknown check '" + c.report_only[i] + "'");
  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
      throw ConfigError("seed", "expected a nonnegative integer");
    c.seed = s.get<std::uint64_t>();
  }

  // Semantic validation that needs the assembled field.
  CoefficientField field = [&] {
    try {
      return initial_field(c);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(c.random_mixture ? "random_mixture" : "initial_modes", e.what());
    }
  }();
  if (c.forcing) {
    try {
      c.forcing->build().validate(c.a, c.b, field.terms().size());
    } catch (const std::invalid_argument& e) {
      throw ConfigError("forcing", e.what());
    }
    if (c.b > StepperOptions{}.latest_time)
      throw ConfigError("time.b", fmt::format("forced runs must end at or before t = {}", StepperOptions{}.latest_time));
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("path", "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_json(const ScenarioConfig& config) { return config_to_json(config).dump(); }

std::string config_hash(const ScenarioConfig& config) { return sha256_hex(canonical_json(config)); }

const char* tool_version() { return PFREQ_VERSION; }

RunOutput run_scenario(const ScenarioConfig& config, std::optional<int> resolution_override) {
  const int resolution = resolution_override.value_or(config.resolution);
  if (resolution < 2) throw ConfigError("resolution", "must be at least 2");
  const Background& bg = config.background;
  const double kappa = config.kappa_used();
  const CoefficientField field = initial_field(config);
  const TimeGrid grid = TimeGrid::uniform(config.a, config.b, config.nodes);
  const Trajectory traj =
      config.forcing ? evolve_forced(field, grid, config.forcing->build()) : evolve_exact(field, grid);

  RunOutput out;
  out.scenario_id = config.id;
  out.background = bg.name();
  out.kappa = kappa;
  out.trace = frequency_trace(traj, kappa);
  out.provenance = {config_hash(config), tool_version(), resolution};

  const QuadratureRule rule = bg.supports_evaluation() ? quadrature(bg, resolution) : QuadratureRule{};
  auto tol = [&](const std::string& name) {
    auto it = config.tolerances.find(name);
    return it != config.tolerances.end() ? it->second : default_tolerance(name);
  };
  const bool forced = config.forcing.has_value();
  auto heat_only = [&](const std::string& name) { return inapplicable(name, bg, "requires a pure heat trajectory"); };

  std::optional<DualReport> harnack, bochner;
  for (const std::string& name : canonical_checks(config.checks)) {
    VerificationReport r;
    if (name == "frequency_monotonicity") {
      r = forced ? heat_only(name) : verify_frequency_monotonicity(traj, kappa, tol(name));
    } else if (name == "equality_case") {
      r = forced ? heat_only(name) : verify_equality_case(traj, kappa, tol(name));
    } else if (name == "harnack" || name == "harnack_printed") {
      if (forced) {
        r = heat_only(name);
      } else {
        if (!harnack) harnack = verify_harnack(traj, kappa, tol(name));
        if (name == "harnack") {
          r = harnack->primary;
        } else if (harnack->verbatim) {
          r = *harnack->verbatim;
        } else {
          r = inapplicable(name, bg, "the printed variant concerns kappa = 0 only");
        }
        r.tolerance = tol(name);
        if (r.verdict != Verdict::Inapplicable) finalize(r);
      }
    } else if (name == "weighted_monotonicity") {
      if (!bg.supports_evaluation()) {
        r = inapplicable(name, bg, "no pointwise evaluation on " + bg.name());
      } else {
        std::vector<VerificationReport> parts;
        for (const auto& tf : packaged_test_functions(bg)) parts.push_back(verify_weighted_monotonicity(bg, tf, grid, rule, tol(name)));
        r = parts.front();
        std::string notes;
        for (std::size_t p = 0; p < parts.size(); ++p) {
          r.tolerance = std::max(r.tolerance, parts[p].tolerance);
          if (p > 0)
            for (std::size_t i = 0; i < r.nodes.size(); ++i) r.nodes[i].value = std::min(r.nodes[i].value, parts[p].nodes[i].value);
          notes += (p ? " | " : "") + parts[p].notes;
        }
        finalize(r);
        r.notes = notes;
      }
    } else if (name == "drift_bochner" || name == "drift_bochner_verbatim") {
      if (!bochner) bochner = verify_drift_bochner(traj, rule, tol(name));
      r = name == "drift_bochner" ? bochner->primary : *bochner->verbatim;
      r.tolerance = tol(name);
      if (r.verdict != Verdict::Inapplicable) finalize(r);
    } else if (name == "general_bounds") {
      r = verify_general_bounds(traj, kappa, rule, tol(name));
    } else if (name == "general_harnack") {
      r = verify_general_harnack(traj, kappa, rule, tol(name));
    } else if (name == "eigenvalue_monotonicity") {
      r = verify_eigenvalue_monotonicity(bg, grid, kappa, tol(name));
    } else if (name == "selfsimilar_scaling") {
      r = verify_selfsimilar_scaling(traj, rule, tol(name));
    } else if (name == "mass_consistency") {
      r = verify_mass_consistency(traj, rule, tol(name));
    }
    r.check_name = name;
    r.scenario_id = config.id;
    r.report_only = std::find(config.report_only.begin(), config.report_only.end(), name) != config.report_only.end();
    out.reports.push_back(std::move(r));
  }
  return out;
}

}  // namespace pfreq

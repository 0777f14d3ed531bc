#include "pfreq/report_io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace pfreq {

using nlohmann::json;

namespace {

json number_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw std::runtime_error("report: expected a number, got " + v.dump());
}

json report_to_json(const VerificationReport& r) {
  json nodes = json::array();
  for (const auto& n : r.nodes) nodes.push_back({{"t", number_json(n.t)}, {"value", number_json(n.value)}});
  return {{"check_name", r.check_name},
          {"background", r.background},
          {"scenario_id", r.scenario_id},
          {"nodes", nodes},
          {"min_margin", number_json(r.min_margin)},
          {"tolerance", number_json(r.tolerance)},
          {"verdict", to_string(r.verdict)},
          {"passed", r.passed},
          {"report_only", r.report_only},
          {"notes", r.notes}};
}

VerificationReport report_from_json(const json& j) {
  VerificationReport r;
  r.check_name = j.at("check_name").get<std::string>();
  r.background = j.at("background").get<std::string>();
  r.scenario_id = j.at("scenario_id").get<std::string>();
  for (const auto& n : j.at("nodes")) r.nodes.push_back({number_from(n.at("t")), number_from(n.at("value"))});
  r.min_margin = number_from(j.at("min_margin"));
  r.tolerance = number_from(j.at("tolerance"));
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  r.passed = j.at("passed").get<bool>();
  r.report_only = j.at("report_only").get<bool>();
  r.notes = j.at("notes").get<std::string>();
  return r;
}

std::string verdict_tag(const VerificationReport& r) {
  switch (r.verdict) {
    case Verdict::Pass:
      return "PASS";
    case Verdict::Fail:
      return r.report_only ? "FAIL*" : "FAIL";
    case Verdict::Inapplicable:
      return "N/A";
  }
  return "N/A";
}

}  // namespace

std::string trace_csv(const RunOutput& out) {
  std::string s = "t,I,D,U,N_raw,cs_defect\n";
  for (const auto& r : out.trace)
    s += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.t, r.I, r.D, r.U, r.N_raw, r.cs_defect);
  return s;
}

std::string report_json(const RunOutput& out) {
  json reports = json::array();
  for (const auto& r : out.reports) reports.push_back(report_to_json(r));
  const json doc = {{"scenario_id", out.scenario_id},
                    {"background", out.background},
                    {"kappa", number_json(out.kappa)},
                    {"reports", reports},
                    {"provenance",
                     {{"config_hash", out.provenance.config_hash},
                      {"tool_version", out.provenance.tool_version},
                      {"resolution", out.provenance.resolution}}}};
  return doc.dump(2) + "\n";
}

ParsedReport parse_report_json(const std::string& text) {
  const json j = json::parse(text);
  ParsedReport p;
  p.scenario_id = j.at("scenario_id").get<std::string>();
  p.background = j.at("background").get<std::string>();
  p.kappa = number_from(j.at("kappa"));
  for (const auto& r : j.at("reports")) p.reports.push_back(report_from_json(r));
  const json& prov = j.at("provenance");
  p.provenance = {prov.at("config_hash").get<std::string>(), prov.at("tool_version").get<std::string>(),
                  prov.at("resolution").get<int>()};
  return p;
}

std::string plot_script(const RunOutput& out) {
  return fmt::format(R"py(#!/usr/bin/env python3
# Plots U(t) and log I(t) for scenario {id} from {id}.trace.csv.
import csv
import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(here, "{id}.trace.csv"), newline="") as fh:
    rows = list(csv.DictReader(fh))

t = [float(r["t"]) for r in rows]
U = [float(r["U"]) for r in rows]
logI = [math.log(float(r["I"])) if float(r["I"]) > 0 else float("nan") for r in rows]

fig, (ax_u, ax_i) = plt.subplots(1, 2, figsize=(10, 4))
ax_u.plot(t, U, marker=".")
ax_u.set_xlabel("t")
ax_u.set_ylabel("U(t)")
ax_u.set_title("{id}: frequency (kappa = {kappa:.6g})")
ax_i.plot(t, logI, marker=".")
ax_i.set_xlabel("t")
ax_i.set_ylabel("log I(t)")
ax_i.set_title("{background}")
fig.tight_layout()
fig.savefig(os.path.join(here, "{id}.png"), dpi=120)
)py",
                     fmt::arg("id", out.scenario_id), fmt::arg("kappa", out.kappa),
                     fmt::arg("background", out.background));
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  static std::atomic<unsigned> counter{0};
  std::filesystem::path tmp = path;
  tmp += fmt::format(".tmp{}", counter.fetch_add(1));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << contents;
    f.flush();
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("cannot write " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot write " + path.string());
  }
}

void emit_trace_csv(const RunOutput& out, const std::filesystem::path& path) { write_atomic(path, trace_csv(out)); }
void emit_report_json(const RunOutput& out, const std::filesystem::path& path) { write_atomic(path, report_json(out)); }
void emit_plot_script(const RunOutput& out, const std::filesystem::path& path) { write_atomic(path, plot_script(out)); }

int exit_code_for(const std::vector<VerificationReport>& reports) {
  bool any_applicable = false;
  for (const auto& r : reports) {
    if (r.report_only) continue;
    if (r.verdict == Verdict::Fail) return kSomeFailed;
    if (r.verdict == Verdict::Pass) any_applicable = true;
  }
  return any_applicable ? kAllPass : kAllInapplicable;
}

SuiteResult run_suite(const std::vector<ScenarioConfig>& configs, const std::filesystem::path& out_dir,
                      std::optional<int> resolution_override, std::ostream* log) {
  SuiteResult result;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    result.errors.push_back("cannot create " + out_dir.string() + ": " + ec.message());
    result.exit_code = kRuntimeError;
    return result;
  }

  std::vector<std::string> ids;
  for (const auto& c : configs) {
    if (std::find(ids.begin(), ids.end(), c.id) != ids.end()) {
      result.errors.push_back("duplicate scenario id '" + c.id + "'");
      result.exit_code = kRuntimeError;
      return result;
    }
    ids.push_back(c.id);
  }

  std::vector<std::future<RunOutput>> jobs;
  for (const auto& c : configs)
    jobs.push_back(std::async(std::launch::async, [&c, &out_dir, resolution_override] {
      RunOutput out = run_scenario(c, resolution_override);
      emit_trace_csv(out, out_dir / (c.id + ".trace.csv"));
      emit_report_json(out, out_dir / (c.id + ".report.json"));
      emit_plot_script(out, out_dir / (c.id + ".plot.py"));
      return out;
    }));
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      result.outputs.push_back(jobs[i].get());
    } catch (const std::exception& e) {
      result.errors.push_back(configs[i].id + ": " + e.what());
    }
  }
  std::sort(result.outputs.begin(), result.outputs.end(),
            [](const RunOutput& a, const RunOutput& b) { return a.scenario_id < b.scenario_id; });
  std::sort(result.errors.begin(), result.errors.end());

  std::vector<VerificationReport> all;
  for (const auto& o : result.outputs) all = merge_reports(std::move(all), o.reports);

  json rows = json::array();
  for (const auto& r : all) {
    rows.push_back({{"scenario_id", r.scenario_id},
                    {"check_name", r.check_name},
                    {"verdict", to_string(r.verdict)},
                    {"min_margin", number_json(r.min_margin)},
                    {"tolerance", number_json(r.tolerance)},
                    {"report_only", r.report_only}});
    if (log)
      *log << fmt::format("{:<6} {:<34} {:<24} min_margin={:<24.17g} tol={:.3g}\n", verdict_tag(r), r.scenario_id,
                          r.check_name, r.min_margin, r.tolerance);
  }
  result.exit_code = result.errors.empty() ? exit_code_for(all) : kRuntimeError;
  const json summary = {{"reports", rows}, {"errors", result.errors}, {"exit_code", result.exit_code}};
  try {
    write_atomic(out_dir / "summary.json", summary.dump(2) + "\n");
  } catch (const std::exception& e) {
    result.errors.push_back(e.what());
    result.exit_code = kRuntimeError;
  }
  if (log) {
    for (const auto& e : result.errors) *log << "error: " << e << "\n";
    *log << fmt::format("{} scenarios, {} reports, exit code {}\n", result.outputs.size(), all.size(),
                        result.exit_code);
  }
  return result;
}

std::vector<ScenarioConfig> load_configs(const std::filesystem::path& path) {
  if (!std::filesystem::is_directory(path)) return {load_config(path)};
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(path))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("path", "no *.json scenarios in " + path.string());
  std::vector<ScenarioConfig> out;
  for (const auto& f : files) {
    try {
      out.push_back(load_config(f));
    } catch (const ConfigError& e) {
      throw ConfigError(e.field(), f.filename().string() + ": " + e.what());
    }
  }
  return out;
}

std::vector<ScenarioConfig> packaged_configs() {
  std::vector<ScenarioConfig> out;
  for (const auto& s : packaged_scenarios()) out.push_back(parse_config(s.json));
  return out;
}

}  // namespace pfreq

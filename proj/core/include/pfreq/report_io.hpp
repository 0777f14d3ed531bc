#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pfreq/scenario.hpp"

namespace pfreq {

/// Columns t,I,D,U,N_raw,cs_defect with 17 significant digits.
std::string trace_csv(const RunOutput& out);
/// Single JSON document: scenario metadata, reports and provenance.
/// Non-finite numbers are written as the strings "nan", "inf", "-inf".
std::string report_json(const RunOutput& out);
/// Standalone matplotlib script plotting U(t) and log I(t) from the CSV
/// next to it. A missing CSV only surfaces when the script is run.
std::string plot_script(const RunOutput& out);

struct ParsedReport {
  std::string scenario_id;
  std::string background;
  double kappa = 0.0;
  std::vector<VerificationReport> reports;
  Provenance provenance;
};

ParsedReport parse_report_json(const std::string& text);

/// Writes through a temporary file in the same directory and renames it.
/// Throws std::runtime_error when the path is unwritable.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

void emit_trace_csv(const RunOutput& out, const std::filesystem::path& path);
void emit_report_json(const RunOutput& out, const std::filesystem::path& path);
void emit_plot_script(const RunOutput& out, const std::filesystem::path& path);

enum ExitCode : int { kAllPass = 0, kSomeFailed = 1, kRuntimeError = 2, kAllInapplicable = 3 };

/// Exit code for a set of reports; report-only checks never fail a run.
int exit_code_for(const std::vector<VerificationReport>& reports);

struct SuiteResult {
  std::vector<RunOutput> outputs;  ///< sorted by scenario id
  std::vector<std::string> errors;
  int exit_code = kAllPass;
};

/// Runs scenarios concurrently, writes <id>.trace.csv, <id>.report.json and
/// <id>.plot.py per scenario plus summary.json, and merges deterministically.
SuiteResult run_suite(const std::vector<ScenarioConfig>& configs, const std::filesystem::path& out_dir,
                      std::optional<int> resolution_override, std::ostream* log);

/// Configs from a file or every *.json in a directory (sorted by name).
std::vector<ScenarioConfig> load_configs(const std::filesystem::path& path);
std::vector<ScenarioConfig> packaged_configs();

}  // namespace pfreq

#include <filesystem>
#include <iostream>
#include <optional>
#include <vector>

#include "CLI11.hpp"
#include "pfreq/report_io.hpp"
#include "pfreq/scenario.hpp"

namespace {

int run_configs(const std::vector<pfreq::ScenarioConfig>& configs, const std::string& out_dir,
                std::optional<int> resolution, bool quiet) {
  const pfreq::SuiteResult r = pfreq::run_suite(configs, out_dir, resolution, quiet ? nullptr : &std::cout);
  if (quiet)
    for (const auto& e : r.errors) std::cerr << "error: " << e << "\n";
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parabolic frequency verification along self-shrinking flows"};
  app.set_version_flag("--version", std::string(pfreq::tool_version()));
  app.require_subcommand(1);

  std::string out_dir = "pfreq-out";
  int resolution = 0;
  bool quiet = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->add_option("--resolution", resolution, "Quadrature resolution override")->check(CLI::Range(2, 4096));
    sub->add_flag("--quiet", quiet, "Only print errors");
  };

  std::vector<std::string> paths;
  CLI::App* run = app.add_subcommand("run", "Run scenario configs (files or directories of *.json)");
  run->add_option("config", paths, "Scenario JSON file or directory")->required();
  add_common(run);

  CLI::App* suite = app.add_subcommand("paper-suite", "Run the packaged scenario suite");
  add_common(suite);

  CLI11_PARSE(app, argc, argv);
  const std::optional<int> res = resolution > 0 ? std::optional<int>(resolution) : std::nullopt;

  try {
    std::vector<pfreq::ScenarioConfig> configs;
    if (*run) {
      for (const auto& p : paths)
        for (auto& c : pfreq::load_configs(p)) configs.push_back(std::move(c));
    } else {
      configs = pfreq::packaged_configs();
    }
    return run_configs(configs, out_dir, res, quiet);
  } catch (const pfreq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return pfreq::kRuntimeError;
}

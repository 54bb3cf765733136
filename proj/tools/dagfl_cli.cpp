// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: `dagfl run`, `dagfl analyze`, `dagfl config`.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "dagfl/analysis/report.hpp"
#include "dagfl/cli/config_file.hpp"
#include "dagfl/cli/runner.hpp"
#include "dagfl/sim/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event simulator for DAG-ledger asynchronous federated learning"};
  app.require_subcommand(1);

  dagfl::RunRequest req;
  std::string config_path;
  auto* run = app.add_subcommand("run", "Run one experiment (optionally a sweep) over seeds");
  run->add_option("--config", config_path, "Config file (sectioned key = value)")
      ->check(CLI::ExistingFile);
  run->add_option("--system", req.system, "dagfl, google, async or blockfl");
  run->add_option("--seeds", req.seeds, "Seed list, e.g. 1,2,3 or 1-5");
  run->add_option("--set", req.overrides, "Override a config field, KEY=VALUE (repeatable)");
  run->add_option("--out", req.out, "Output directory")->capture_default_str();
  run->add_option("--sweep", req.sweep, "Sweep one field, KEY=V1,V2,...");
  run->add_flag("--dump-dag", req.dump_dag, "Also write the final DAG as JSON lines");

  std::vector<std::string> csv_paths;
  std::string analysis_out;
  auto* analyze = app.add_subcommand("analyze", "Analyze metrics CSV files");
  analyze->add_option("csv", csv_paths, "Metrics CSV files")->required()->check(CLI::ExistingFile);
  analyze->add_option("--out", analysis_out, "Write analysis JSON here instead of stdout");

  std::vector<std::string> show_overrides;
  std::string show_path;
  auto* show = app.add_subcommand("config", "Print the effective configuration");
  show->add_option("--config", show_path, "Config file")->check(CLI::ExistingFile);
  show->add_option("--set", show_overrides, "Override a config field, KEY=VALUE");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : dagfl::kExitConfig;
  }

  if (*run) {
    if (!config_path.empty()) req.config = config_path;
    return dagfl::run_experiment(req, std::cout, std::cerr).exit_code;
  }

  if (*analyze) {
    nlohmann::json all = nlohmann::json::array();
    try {
      for (const auto& p : csv_paths) all.push_back(dagfl::analyze(dagfl::load_metrics(p)));
    } catch (const std::exception& e) {
      std::cerr << "analyze: " << e.what() << '\n';
      return dagfl::kExitConfig;
    }
    if (analysis_out.empty()) {
      std::cout << all.dump(2) << '\n';
    } else {
      std::ofstream(analysis_out) << all.dump(2) << '\n';
    }
    return dagfl::kExitOk;
  }

  try {
    dagfl::ExperimentConfig cfg;
    if (!show_path.empty()) cfg = dagfl::load_config(show_path);
    dagfl::apply_overrides(cfg, show_overrides);
    cfg.validate();
    std::cout << dagfl::render_config(cfg);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return dagfl::kExitConfig;
  }
  return dagfl::kExitOk;
}

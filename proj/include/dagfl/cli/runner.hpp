// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dagfl {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitStarvation = 3;

struct RunRequest {
  std::optional<std::filesystem::path> config;
  std::optional<std::string> system;
  std::optional<std::string> seeds;
  std::vector<std::string> overrides;
  std::optional<std::string> sweep;
  std::filesystem::path out = "runs";
  bool dump_dag = false;
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::string run_id;
  std::filesystem::path directory;
  std::vector<std::filesystem::path> artifacts;
};

// Runs every (sweep value, seed) pair and writes into <out>/run-<run_id>/:
// config.cfg (the effective configuration), one CSV and JSON summary per
// run, sweep.csv for sweeps, and manifest.json. run_id is a digest of the
// configuration, system, seeds and sweep, so identical requests map to the
// same directory. Configuration errors are reported on `err` before any
// run starts.
RunOutcome run_experiment(const RunRequest& request, std::ostream& out, std::ostream& err);

}  // namespace dagfl

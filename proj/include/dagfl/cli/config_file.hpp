// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dagfl/sim/config.hpp"

namespace dagfl {

// Throws ConfigError when the file cannot be read or parsed.
ExperimentConfig load_config(const std::filesystem::path& path);

// Each entry is KEY=VALUE with KEY as accepted by set_field.
void apply_overrides(ExperimentConfig& cfg, std::span<const std::string> overrides);

// "1,2,3" or "1-5". Throws ConfigError on an empty or malformed list.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

struct SweepSpec {
  std::string key;
  std::vector<std::string> values;
};

// "KEY=V1,V2,...". Throws ConfigError on a missing key or empty value list.
SweepSpec parse_sweep(std::string_view text);

}  // namespace dagfl

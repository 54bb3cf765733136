// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "dagfl/sim/metrics.hpp"

namespace dagfl {

// Reads <stem>.csv and, when present, <stem>.json.
MetricsLog load_metrics(const std::filesystem::path& csv_path);

// Post-run analysis of one log: tips over the stationary window
// [end/2, end], accuracy trajectory landmarks, and the summary fields the
// analysis depends on.
nlohmann::json analyze(const MetricsLog& log);

}  // namespace dagfl

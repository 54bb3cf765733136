// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/analysis/report.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "dagfl/analysis/tips.hpp"

namespace dagfl {

MetricsLog load_metrics(const std::filesystem::path& csv_path) {
  std::ifstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot open " + csv_path.string());
  MetricsLog log = read_csv(csv);
  std::filesystem::path json_path = csv_path;
  json_path.replace_extension(".json");
  if (std::ifstream js(json_path); js) {
    log.summary = summary_from_json(nlohmann::json::parse(js));
  }
  return log;
}

nlohmann::json analyze(const MetricsLog& log) {
  nlohmann::json out{{"system", log.system}, {"seed", log.seed}, {"samples", log.rows.size()}};
  if (log.rows.empty()) return out;
  double end = log.rows.back().time;
  if (end > 0.0) {
    out["stationary_window"] = {end / 2.0, end};
    out["mean_tips"] = measure_tips(log.rows, end / 2.0, end);
  }
  double best = 0.0;
  for (const auto& r : log.rows) best = std::max(best, r.accuracy);
  out["final_accuracy"] = log.rows.back().accuracy;
  out["best_accuracy"] = best;
  for (double level : {0.5, 0.8, 0.9}) {
    for (const auto& r : log.rows) {
      if (r.accuracy >= level) {
        out["time_to_accuracy"][format_double(level)] = r.time;
        break;
      }
    }
  }
  const RunSummary& s = log.summary;
  if (!s.end_reason.empty()) {
    out["iterations"] = s.iterations;
    out["r0_over_r"] = s.r0_over_r ? nlohmann::json(*s.r0_over_r) : nlohmann::json(nullptr);
    out["attack_success_rate"] = s.attack_success_rate;
    out["predicted_tips"] =
        s.predicted_tips ? nlohmann::json(*s.predicted_tips) : nlohmann::json(nullptr);
  }
  return out;
}

}  // namespace dagfl

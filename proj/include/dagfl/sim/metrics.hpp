// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace dagfl {

struct MetricsRow {
  double time = 0.0;
  std::uint64_t iterations = 0;
  std::size_t tips = 0;
  double accuracy = 0.0;
  double loss = 0.0;

  bool operator==(const MetricsRow&) const = default;
};

struct RunSummary {
  std::string end_reason;  // duration | max_iterations | end_signal | starvation
  std::string diagnostic;
  double end_time = 0.0;

  std::uint64_t arrivals = 0;
  std::uint64_t lost_arrivals = 0;  // no idle node at the arrival
  std::uint64_t iterations = 0;     // successful local trainings
  std::uint64_t failed_iterations = 0;
  std::uint64_t aborted_iterations = 0;
  std::uint64_t dropped_uploads = 0;
  std::uint64_t transactions = 0;
  std::uint64_t rounds = 0;
  std::uint64_t blocks = 0;

  double final_accuracy = 0.0;
  double final_loss = 0.0;
  // Mean sampled accuracy over the last tenth of the run.
  double tail_accuracy = 0.0;
  std::optional<double> global_objective;
  double attack_success_rate = 0.0;

  double mean_delay = 0.0;
  double expected_delay = 0.0;
  double mean_interarrival = 0.0;

  std::size_t m_threshold = 0;
  // Indexed by node id - 1; nullopt when the node published nothing.
  std::vector<std::optional<double>> contribution;
  std::optional<double> r;
  std::optional<double> r0;
  std::optional<double> r0_over_r;
  std::size_t undefined_rates = 0;

  double mean_tips = 0.0;
  std::optional<double> predicted_tips;
};

struct MetricsLog {
  std::string system;
  std::uint64_t seed = 0;
  std::vector<MetricsRow> rows;
  RunSummary summary;
};

// "# dagfl-metrics v1 system=<name> seed=<n>", the column header, then one
// row per sample. Doubles use the shortest round-tripping form.
void write_csv(std::ostream& out, const MetricsLog& log);
// Reads rows plus the system and seed from the header comment. Throws
// std::runtime_error on a missing or unknown header.
MetricsLog read_csv(std::istream& in);

nlohmann::json summary_json(const MetricsLog& log);
RunSummary summary_from_json(const nlohmann::json& j);

// Unweighted mean of the per-node objectives. Throws on an empty span.
double global_objective(std::span<const double> per_node_loss);

std::string format_double(double v);

}  // namespace dagfl

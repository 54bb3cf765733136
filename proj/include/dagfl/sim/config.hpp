// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dagfl/model/model.hpp"
#include "dagfl/protocol/agent.hpp"
#include "dagfl/protocol/node.hpp"

namespace dagfl {

// Unit conventions used everywhere: 1 MB = 8e6 bits, 1 Mbps = 1e6 bit/s.
constexpr double megabytes_to_bits(double mb) { return mb * 8e6; }
constexpr double mbps_to_bps(double mbps) { return mbps * 1e6; }

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class SystemKind { dagfl, google, async, blockfl };

std::string_view system_name(SystemKind s);
SystemKind parse_system(std::string_view name);

struct ExperimentConfig {
  // [data]
  std::string dataset = "synthetic";  // "synthetic" or "idx"
  std::size_t classes = 10;
  std::size_t per_class = 3000;
  std::size_t dim = 16;
  double spread = 1.0;
  double validation_fraction = 0.2;
  std::string train_images, train_labels, test_images, test_labels;

  // [model]
  std::size_t hidden = 0;
  double learning_rate = 0.2;
  std::size_t minibatch = 5;
  std::size_t beta = 1;

  // [protocol]
  std::size_t k = 2;
  std::size_t alpha = 5;
  double tau_max = 20.0;
  double acc_target = 1.0;
  double poll_interval = 10.0;

  // [platform]
  std::size_t nodes = 100;
  double bandwidth = mbps_to_bps(100);
  double tx_bits = megabytes_to_bits(7);
  double phi0_bits = megabytes_to_bits(0.3);
  double phi1_bits = megabytes_to_bits(0.3);
  double eta0 = 500;
  double eta1 = 160;
  double f_min = 1e9;
  double f_max = 2e9;

  // [simulator]
  double lambda = 1.0;
  double p = 1.0;
  double duration = 3000.0;
  std::size_t max_iterations = 0;  // 0 = unbounded
  double sync_interval = 1.0;
  double sample_interval = 1.0;
  double watchdog = 600.0;
  std::uint64_t seed = 1;
  std::string kernel = "auto";
  bool record_trace = false;

  // [adversary]
  std::size_t lazy_nodes = 0;
  std::size_t poisoning_nodes = 0;
  std::size_t backdoor_nodes = 0;
  double poison_fraction = 1.0;
  double backdoor_fraction = 0.5;
  std::size_t trigger_width = 5;
  double trigger_offset = 1.5;

  // [analysis]
  std::size_t m_threshold = 0;

  // [baselines]
  SystemKind system = SystemKind::dagfl;
  std::size_t round_size = 10;
  double retry_factor = 2.0;
  std::size_t miners = 5;
  std::size_t block_size = 5;
  double block_timeout = 10.0;
  double pow_mean = 5.0;
  double miner_floor = 0.8;

  // Throws ConfigError naming the first offending field.
  void validate() const;

  ProtocolConfig protocol() const;
  AgentConfig agent() const;
  TrainConfig train() const;
  std::size_t adversaries() const { return lazy_nodes + poisoning_nodes + backdoor_nodes; }
};

// Field table access. Keys are bare names ("k") or "section.name" ("protocol.k").
void set_field(ExperimentConfig& cfg, std::string_view key, std::string_view value);
std::string get_field(const ExperimentConfig& cfg, std::string_view key);
std::vector<std::string> field_names();

// Canonical text form: "[section]" headers then "key = value" lines in a
// fixed order. Round-trips through parse_config_text.
std::string render_config(const ExperimentConfig& cfg);
ExperimentConfig parse_config_text(std::string_view text);

}  // namespace dagfl

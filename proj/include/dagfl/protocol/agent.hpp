// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "dagfl/ledger/dag.hpp"
#include "dagfl/model/model.hpp"

namespace dagfl {

struct AgentConfig {
  // Training ends once the aggregated model's accuracy strictly exceeds this.
  double acc_target = 0.9;
  double poll_interval = 10.0;
  std::size_t alpha = 5;
  std::size_t k = 2;
  double tau_max = 20.0;

  // Throws std::invalid_argument; acc_target must lie in [0, 1].
  void validate() const;
};

struct AgentPollResult {
  bool finished = false;
  // No eligible tips: nothing was evaluated.
  bool starved = false;
  std::optional<ModelParams> model;
  double accuracy = 0.0;
  double loss = 0.0;
  std::vector<TransactionId> used;
};

// The external agent's polling step: validate up to alpha fresh tips on the
// global test set, average the k best and test the aggregate.
AgentPollResult agent_poll(const AgentConfig& cfg, const Dag& dag, double now,
                           const DataShard& test, const KeyRegistry& keys, Rng& rng);

}  // namespace dagfl

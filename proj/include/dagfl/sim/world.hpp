// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "dagfl/protocol/node.hpp"
#include "dagfl/sim/config.hpp"
#include "dagfl/sim/delays.hpp"

namespace dagfl {

// Independent RNG stream for (seed, stream).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Everything a run is built from that does not depend on the system being
// simulated. Every system of one seed consumes the same World.
struct World {
  ExperimentConfig cfg;
  ModelShape shape;
  DataShard test;
  // nodes[i].id == i + 1; id 0 is the agent.
  std::vector<NodeProfile> nodes;
  std::vector<IterationDelays> delays;
  std::shared_ptr<const KeyRegistry> keys;
  AuthKey agent_key;
  ModelParams initial_model;
  BackdoorTrigger trigger;
  // Ids of lazy, poisoning and backdoor nodes, ascending.
  std::vector<NodeId> abnormal;

  std::size_t size() const { return nodes.size(); }
  const NodeProfile& node(NodeId id) const { return nodes.at(id - 1); }
  const IterationDelays& delay(NodeId id) const { return delays.at(id - 1); }
  double mean_h() const;
  double mean_d0() const;
};

// Validates cfg, then loads or synthesizes data, partitions it, draws CPU
// frequencies and the adversary assignment, and corrupts adversary shards.
World build_world(const ExperimentConfig& cfg);

}  // namespace dagfl

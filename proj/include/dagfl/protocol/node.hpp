// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dagfl/ledger/dag.hpp"
#include "dagfl/model/model.hpp"
#include "dagfl/protocol/behavior.hpp"

namespace dagfl {

// A simulated participant. `train` and `validation` are the node's local
// data as the node sees it: already corrupted for poisoning and backdoor
// nodes.
struct NodeProfile {
  NodeId id = 0;
  double cpu_hz = 1e9;
  DataShard train;
  DataShard validation;
  Behavior behavior = Behavior::normal;
  AuthKey key;
};

struct ProtocolConfig {
  std::size_t alpha = 5;
  std::size_t k = 2;
  double tau_max = 20.0;
  TrainConfig train;

  // Throws std::invalid_argument; requires 1 <= k < alpha and tau_max > 0.
  void validate() const;
};

struct CandidateScore {
  TransactionId id;
  NodeId publisher = 0;
  double published_at = 0.0;
  double accuracy = 0.0;
  bool authentic = false;
};

struct CandidateSelection {
  std::vector<TransactionId> ids;
  // No fresh tips were available; ids are the newest transactions instead.
  bool fallback = false;
  // Only the node's own transactions were eligible.
  bool self_only = false;
};

// Stage 1. Random subset (at most alpha) of the fresh tips, excluding the
// node's own transactions unless nothing else is eligible. With no fresh
// tips at all, falls back to the alpha newest transactions.
CandidateSelection choose_candidates(const Dag& dag, NodeId self, double now,
                                     const ProtocolConfig& cfg, Rng& rng);

// Stage 2. Checks the auth tag of each candidate against the registry and
// scores authentic ones on `validation`.
std::vector<CandidateScore> score_candidates(const Dag& dag, std::span<const TransactionId> ids,
                                             const DataShard& validation, const KeyRegistry& keys);

// Stage 3 ranking: the k best authentic candidates by accuracy, ties to the
// earlier publication, then the smaller id. Returns fewer than k when fewer
// are authentic.
std::vector<CandidateScore> top_k(std::span<const CandidateScore> scores, std::size_t k);

struct IterationResult {
  // nullptr when the iteration was aborted.
  TransactionPtr tx;
  double delay = 0.0;
  CandidateSelection selection;
  std::vector<CandidateScore> scores;
  std::vector<TransactionId> approved;
  // The aggregated model the node started from.
  ModelParams global;
  // Mean minibatch loss of local training; nullopt for lazy nodes.
  std::optional<double> train_loss;
  bool aborted = false;
};

// One DAG-FL iteration of `node` starting at `now`. Lazy nodes skip training
// and republish their own newest model in `dag`, or the aggregate when they
// have none. The resulting transaction is stamped `now + delay` and approves
// exactly the models it averaged.
IterationResult node_iteration(const NodeProfile& node, const Dag& dag, double now, double delay,
                               const ProtocolConfig& cfg, const KeyRegistry& keys, Rng& rng);

}  // namespace dagfl

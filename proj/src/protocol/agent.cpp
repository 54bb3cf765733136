// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/protocol/agent.hpp"

#include <stdexcept>

#include "dagfl/protocol/node.hpp"

namespace dagfl {

void AgentConfig::validate() const {
  if (!(acc_target >= 0.0 && acc_target <= 1.0)) {
    throw std::invalid_argument("acc_target must lie in [0, 1]");
  }
  if (!(poll_interval > 0.0)) throw std::invalid_argument("poll_interval must be positive");
  if (k < 1 || !(k < alpha)) throw std::invalid_argument("k < alpha required");
  if (!(tau_max > 0.0)) throw std::invalid_argument("tau_max must be positive");
}

AgentPollResult agent_poll(const AgentConfig& cfg, const Dag& dag, double now,
                           const DataShard& test, const KeyRegistry& keys, Rng& rng) {
  AgentPollResult out;
  std::vector<TransactionId> candidates = dag.select_candidate_tips(now, cfg.tau_max, cfg.alpha, rng);
  std::vector<CandidateScore> best = top_k(score_candidates(dag, candidates, test, keys), cfg.k);
  if (best.empty()) {
    out.starved = true;
    return out;
  }
  std::vector<const ModelParams*> models;
  for (const auto& c : best) {
    out.used.push_back(c.id);
    models.push_back(&dag.find(c.id)->model);
  }
  ModelParams global = federated_average(models);
  Evaluation e = evaluate(global, test);
  out.accuracy = e.accuracy;
  out.loss = e.loss;
  out.finished = e.accuracy > cfg.acc_target;
  out.model = std::move(global);
  return out;
}

}  // namespace dagfl

// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/protocol/node.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>
#include <string>

namespace dagfl {

void ProtocolConfig::validate() const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!(k < alpha)) {
    throw std::invalid_argument("k < alpha required (k=" + std::to_string(k) +
                                ", alpha=" + std::to_string(alpha) + ")");
  }
  if (!(tau_max > 0.0)) throw std::invalid_argument("tau_max must be positive");
  train.validate();
}

CandidateSelection choose_candidates(const Dag& dag, NodeId self, double now,
                                     const ProtocolConfig& cfg, Rng& rng) {
  CandidateSelection sel;
  auto is_mine = [&](TransactionId id) { return dag.find(id)->publisher == self; };

  std::vector<TransactionId> tips = dag.tips(now, cfg.tau_max);
  if (!tips.empty()) {
    std::vector<TransactionId> others;
    std::copy_if(tips.begin(), tips.end(), std::back_inserter(others),
                 [&](TransactionId id) { return !is_mine(id); });
    sel.self_only = others.empty();
    sel.ids = sample_without_replacement(sel.self_only ? tips : others, cfg.alpha, rng);
    return sel;
  }

  sel.fallback = true;
  std::vector<TransactionId> newest = dag.latest(dag.size());
  std::vector<TransactionId> others;
  for (TransactionId id : newest) {
    if (others.size() == cfg.alpha) break;
    if (!is_mine(id)) others.push_back(id);
  }
  if (others.empty()) {
    sel.self_only = true;
    newest.resize(std::min(newest.size(), cfg.alpha));
    sel.ids = std::move(newest);
  } else {
    sel.ids = std::move(others);
  }
  return sel;
}

std::vector<CandidateScore> score_candidates(const Dag& dag, std::span<const TransactionId> ids,
                                             const DataShard& validation, const KeyRegistry& keys) {
  std::vector<CandidateScore> out;
  out.reserve(ids.size());
  for (TransactionId id : ids) {
    const Transaction* tx = dag.find(id);
    if (tx == nullptr) continue;
    CandidateScore s{id, tx->publisher, tx->published_at, 0.0, false};
    auto key = keys.find(tx->publisher);
    s.authentic = key.has_value() && verify_transaction(*tx, *key);
    if (s.authentic) s.accuracy = evaluate(tx->model, validation).accuracy;
    out.push_back(s);
  }
  return out;
}

std::vector<CandidateScore> top_k(std::span<const CandidateScore> scores, std::size_t k) {
  std::vector<CandidateScore> ok;
  std::copy_if(scores.begin(), scores.end(), std::back_inserter(ok),
               [](const CandidateScore& s) { return s.authentic; });
  std::sort(ok.begin(), ok.end(), [](const CandidateScore& a, const CandidateScore& b) {
    if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
    if (a.published_at != b.published_at) return a.published_at < b.published_at;
    return a.id < b.id;
  });
  if (ok.size() > k) ok.resize(k);
  return ok;
}

IterationResult node_iteration(const NodeProfile& node, const Dag& dag, double now, double delay,
                               const ProtocolConfig& cfg, const KeyRegistry& keys, Rng& rng) {
  IterationResult out;
  out.delay = delay;
  if (dag.empty()) {
    out.aborted = true;
    return out;
  }
  out.selection = choose_candidates(dag, node.id, now, cfg, rng);
  const DataShard& validation = node.validation.empty() ? node.train : node.validation;
  out.scores = score_candidates(dag, out.selection.ids, validation, keys);
  std::vector<CandidateScore> chosen = top_k(out.scores, cfg.k);
  if (chosen.empty()) {
    out.aborted = true;
    return out;
  }

  std::vector<const ModelParams*> models;
  for (const auto& c : chosen) {
    out.approved.push_back(c.id);
    models.push_back(&dag.find(c.id)->model);
  }
  out.global = federated_average(models);

  ModelParams local;
  if (node.behavior == Behavior::lazy) {
    // Republish the node's last model; the aggregate only the first time.
    auto own = dag.published_by(node.id);
    local = own.empty() ? out.global : dag.transactions()[own.back()]->model;
  } else {
    TrainResult r = train(out.global, node.train, cfg.train, rng);
    out.train_loss = r.mean_loss;
    local = std::move(r.model);
  }
  out.tx = make_transaction(node.id, now + delay, std::move(local), out.approved, node.key);
  return out;
}

}  // namespace dagfl

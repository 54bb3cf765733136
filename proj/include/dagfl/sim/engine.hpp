// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dagfl/ledger/dag.hpp"
#include "dagfl/sim/metrics.hpp"
#include "dagfl/sim/world.hpp"

namespace dagfl {

// Idle arrivals: a Poisson process of rate lambda over the whole node set.
// Each arrival wakes a uniformly chosen idle node whose iteration then
// succeeds with probability p.
class ArrivalProcess {
 public:
  ArrivalProcess(double lambda, double p, std::uint64_t seed)
      : rng_(seed), gap_(lambda), success_(p) {}

  double next_gap() { return gap_(rng_); }
  // busy is indexed by node id - 1; nullopt when every node is busy.
  std::optional<NodeId> pick(const std::vector<bool>& busy);
  bool succeeds() { return success_(rng_); }

 private:
  Rng rng_;
  std::exponential_distribution<double> gap_;
  std::bernoulli_distribution success_;
  std::vector<NodeId> scratch_;
};

struct LocalUpdate {
  ModelParams model;
  // nullopt for lazy nodes, which republish their input unchanged.
  std::optional<double> train_loss;
};

// What a baseline node uploads after starting from `global`.
LocalUpdate local_update(const NodeProfile& node, const ModelParams& global,
                         const TrainConfig& cfg, Rng& rng);

struct VisibilityRecord {
  NodeId node = 0;
  TransactionId tx;
  double published_at = 0.0;
  double visible_at = 0.0;
};

struct RoundRecord {
  double start = 0.0;
  double end = 0.0;
  // Delay of each member whose upload made it into the aggregate.
  std::vector<double> member_delays;
  std::size_t failures = 0;
};

struct RunResult {
  MetricsLog log;
  ModelParams final_model;
  // Global DAG of a DAG-FL run; nullptr for the baselines.
  std::shared_ptr<const Dag> dag;
  // Filled only when cfg.record_trace is set.
  std::vector<double> event_times;
  std::vector<VisibilityRecord> visibility;
  // Synchronous baseline only.
  std::vector<RoundRecord> rounds;
};

// Counters and the sampled time series shared by every system.
class RunRecorder {
 public:
  RunRecorder(const World& world, SystemKind system);

  // Appends a row when t reaches the next sample time; returns the time of
  // the following sample.
  double sample(double t, std::size_t tips);
  void set_quality(double accuracy, double loss) {
    accuracy_ = accuracy;
    loss_ = loss;
  }

  RunSummary& summary() { return summary_; }
  std::uint64_t iterations() const { return summary_.iterations; }
  void completed(NodeId node, double start, double h, std::optional<double> train_loss);

  // Evaluates the final model, fills the delay, objective and attack fields
  // and closes the series with a row at end_time.
  MetricsLog finish(double end_time, std::string reason, const ModelParams& final_model,
                    std::size_t final_tips);

 private:
  const World& world_;
  SystemKind system_;
  MetricsLog log_;
  RunSummary summary_;
  std::size_t next_sample_ = 0;
  double accuracy_ = 0.0;
  double loss_ = 0.0;
  double delay_sum_ = 0.0;
  std::vector<double> starts_;
  std::vector<std::optional<double>> node_loss_;
};

}  // namespace dagfl

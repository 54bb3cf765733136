// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/sim/engine.hpp"

#include <algorithm>

#include "dagfl/analysis/attack.hpp"

namespace dagfl {

std::optional<NodeId> ArrivalProcess::pick(const std::vector<bool>& busy) {
  scratch_.clear();
  for (std::size_t i = 0; i < busy.size(); ++i) {
    if (!busy[i]) scratch_.push_back(static_cast<NodeId>(i + 1));
  }
  if (scratch_.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick(0, scratch_.size() - 1);
  return scratch_[pick(rng_)];
}

LocalUpdate local_update(const NodeProfile& node, const ModelParams& global,
                         const TrainConfig& cfg, Rng& rng) {
  if (node.behavior == Behavior::lazy) return {global, std::nullopt};
  TrainResult r = train(global, node.train, cfg, rng);
  return {std::move(r.model), r.mean_loss};
}

RunRecorder::RunRecorder(const World& world, SystemKind system)
    : world_(world), system_(system), node_loss_(world.size()) {
  log_.system = std::string(system_name(system));
  log_.seed = world.cfg.seed;
  summary_.m_threshold = world.cfg.m_threshold;
  Evaluation e = evaluate(world.initial_model, world.test);
  accuracy_ = e.accuracy;
  loss_ = e.loss;
}

double RunRecorder::sample(double t, std::size_t tips) {
  const double interval = world_.cfg.sample_interval;
  while (static_cast<double>(next_sample_) * interval <= t) {
    log_.rows.push_back({static_cast<double>(next_sample_) * interval, summary_.iterations, tips,
                         accuracy_, loss_});
    ++next_sample_;
  }
  return static_cast<double>(next_sample_) * interval;
}

void RunRecorder::completed(NodeId node, double start, double h,
                            std::optional<double> train_loss) {
  ++summary_.iterations;
  delay_sum_ += h;
  starts_.push_back(start);
  if (train_loss) node_loss_.at(node - 1) = train_loss;
}

MetricsLog RunRecorder::finish(double end_time, std::string reason,
                               const ModelParams& final_model, std::size_t final_tips) {
  summary_.end_reason = std::move(reason);
  summary_.end_time = end_time;

  Evaluation e = evaluate(final_model, world_.test);
  summary_.final_accuracy = e.accuracy;
  summary_.final_loss = e.loss;
  accuracy_ = e.accuracy;
  loss_ = e.loss;
  if (log_.rows.empty() || log_.rows.back().time < end_time) {
    log_.rows.push_back({end_time, summary_.iterations, final_tips, accuracy_, loss_});
  } else {
    log_.rows.back().accuracy = accuracy_;
    log_.rows.back().loss = loss_;
    log_.rows.back().iterations = summary_.iterations;
  }

  // Samples are evenly spaced, so a plain mean over the window is enough.
  double tail_sum = 0.0;
  std::size_t tail_n = 0;
  for (const auto& row : log_.rows) {
    if (row.time >= 0.9 * end_time) {
      tail_sum += row.accuracy;
      ++tail_n;
    }
  }
  summary_.tail_accuracy = tail_sum / static_cast<double>(tail_n);

  if (summary_.iterations > 0) {
    summary_.mean_delay = delay_sum_ / static_cast<double>(summary_.iterations);
  }
  summary_.expected_delay = system_ == SystemKind::dagfl ? world_.mean_h() : world_.mean_d0();
  if (starts_.size() >= 2) {
    std::sort(starts_.begin(), starts_.end());
    summary_.mean_interarrival =
        (starts_.back() - starts_.front()) / static_cast<double>(starts_.size() - 1);
  }

  std::vector<double> losses;
  for (const auto& l : node_loss_) {
    if (l) losses.push_back(*l);
  }
  if (!losses.empty()) summary_.global_objective = global_objective(losses);
  summary_.attack_success_rate = attack_success_rate(final_model, world_.test, world_.trigger);

  log_.summary = summary_;
  return std::move(log_);
}

}  // namespace dagfl

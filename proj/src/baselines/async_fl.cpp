// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/baselines/async_fl.hpp"

#include <stdexcept>

#include "dagfl/sim/event_queue.hpp"

namespace dagfl {

ModelParams async_fl_update(const ModelParams& global, const ModelParams& local) {
  if (!(global.shape == local.shape) || global.values.size() != local.values.size()) {
    throw ModelError("async update: shape mismatch");
  }
  ModelParams out = global;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = 0.5 * global.values[i] + 0.5 * local.values[i];
  }
  return out;
}

namespace {

enum Stream : std::uint64_t { kArrivals = 100, kNodeRng = 5000 };

struct Payload {
  std::optional<ModelParams> model;
  double start = 0.0;
  std::optional<double> train_loss;
};

class AsyncRun {
 public:
  explicit AsyncRun(const World& w)
      : w_(w),
        cfg_(w.cfg),
        arrivals_(cfg_.lambda, cfg_.p, derive_seed(cfg_.seed, kArrivals)),
        recorder_(w, SystemKind::async),
        busy_(w.size(), false),
        global_(w.initial_model) {
    for (const auto& n : w.nodes) node_rng_.emplace_back(derive_seed(cfg_.seed, kNodeRng + n.id));
  }

  RunResult run() {
    q_.push(arrivals_.next_gap(), EventKind::node_idle, 0);
    q_.push(cfg_.poll_interval, EventKind::agent_poll, kAgentNode);
    q_.push(0.0, EventKind::metrics_sample, kAgentNode);
    double end_time = cfg_.duration;
    std::string reason = "duration";
    while (!q_.empty()) {
      if (q_.top().at > cfg_.duration) break;
      if (q_.top().at - last_progress_ > cfg_.watchdog) {
        end_time = last_progress_ + cfg_.watchdog;
        reason = "starvation";
        recorder_.summary().diagnostic =
            "no upload for " + format_double(cfg_.watchdog) + " s";
        break;
      }
      auto e = q_.pop();
      if (cfg_.record_trace) result_.event_times.push_back(e.at);
      handle(e);
      if (cfg_.max_iterations > 0 && recorder_.iterations() >= cfg_.max_iterations) {
        end_time = e.at;
        reason = "max_iterations";
        break;
      }
    }
    result_.log = recorder_.finish(end_time, reason, global_, 0);
    result_.final_model = global_;
    return std::move(result_);
  }

 private:
  using Queue = EventQueue<Payload>;

  void handle(Queue::Event& e) {
    switch (e.kind) {
      case EventKind::node_idle: on_arrival(e.at); break;
      case EventKind::iteration_complete: on_upload(e); break;
      case EventKind::agent_poll: {
        Evaluation ev = evaluate(global_, w_.test);
        recorder_.set_quality(ev.accuracy, ev.loss);
        q_.push(e.at + cfg_.poll_interval, EventKind::agent_poll, kAgentNode);
        break;
      }
      case EventKind::metrics_sample:
        q_.push(recorder_.sample(e.at, 0), EventKind::metrics_sample, kAgentNode);
        break;
      default: throw std::logic_error("unexpected event kind");
    }
  }

  void on_arrival(double now) {
    q_.push(now + arrivals_.next_gap(), EventKind::node_idle, 0);
    ++recorder_.summary().arrivals;
    std::optional<NodeId> id = arrivals_.pick(busy_);
    if (!id) {
      ++recorder_.summary().lost_arrivals;
      return;
    }
    busy_[*id - 1] = true;
    const double d0 = w_.delay(*id).d0;
    if (!arrivals_.succeeds()) {
      ++recorder_.summary().failed_iterations;
      q_.push(now + d0, EventKind::iteration_complete, *id, Payload{std::nullopt, now, std::nullopt});
      return;
    }
    LocalUpdate u = local_update(w_.node(*id), global_, cfg_.train(), node_rng_[*id - 1]);
    q_.push(now + d0, EventKind::iteration_complete, *id,
            Payload{std::move(u.model), now, u.train_loss});
  }

  void on_upload(Queue::Event& e) {
    busy_[e.node - 1] = false;
    Payload& p = e.payload;
    if (!p.model) return;
    global_ = async_fl_update(global_, *p.model);
    last_progress_ = e.at;
    recorder_.completed(e.node, p.start, e.at - p.start, p.train_loss);
  }

  const World& w_;
  const ExperimentConfig& cfg_;
  ArrivalProcess arrivals_;
  RunRecorder recorder_;
  Queue q_;
  std::vector<Rng> node_rng_;
  std::vector<bool> busy_;
  ModelParams global_;
  double last_progress_ = 0.0;
  RunResult result_;
};

}  // namespace

RunResult run_async_fl(const World& world) { return AsyncRun(world).run(); }

}  // namespace dagfl

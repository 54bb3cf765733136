// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/baselines/google_fl.hpp"

#include <deque>
#include <stdexcept>

#include "dagfl/sim/event_queue.hpp"

namespace dagfl {

ModelParams google_fl_aggregate(std::span<const ModelParams> uploads) {
  std::vector<const ModelParams*> ptrs;
  for (const auto& m : uploads) ptrs.push_back(&m);
  return federated_average(ptrs);
}

namespace {

enum Stream : std::uint64_t { kArrivals = 100, kNodeRng = 5000 };

struct Payload {
  std::optional<ModelParams> model;
  double start = 0.0;
  std::optional<double> train_loss;
};

class GoogleRun {
 public:
  explicit GoogleRun(const World& w)
      : w_(w),
        cfg_(w.cfg),
        arrivals_(cfg_.lambda, cfg_.p, derive_seed(cfg_.seed, kArrivals)),
        recorder_(w, SystemKind::google),
        unavailable_(w.size(), false),
        global_(w.initial_model) {
    for (const auto& n : w.nodes) node_rng_.emplace_back(derive_seed(cfg_.seed, kNodeRng + n.id));
  }

  RunResult run() {
    q_.push(arrivals_.next_gap(), EventKind::node_idle, 0);
    q_.push(0.0, EventKind::metrics_sample, kAgentNode);
    double end_time = cfg_.duration;
    std::string reason = "duration";
    while (!q_.empty()) {
      if (q_.top().at > cfg_.duration) break;
      if (q_.top().at - last_progress_ > cfg_.watchdog) {
        end_time = last_progress_ + cfg_.watchdog;
        reason = "starvation";
        recorder_.summary().diagnostic =
            "no round completed for " + format_double(cfg_.watchdog) + " s";
        break;
      }
      auto e = q_.pop();
      if (cfg_.record_trace) result_.event_times.push_back(e.at);
      handle(e);
      if (stop_) {
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
      case EventKind::round_timeout: on_member_failed(e.at, e.node); break;
      case EventKind::metrics_sample:
        q_.push(recorder_.sample(e.at, 0), EventKind::metrics_sample, kAgentNode);
        break;
      default: throw std::logic_error("unexpected event kind");
    }
  }

  void on_arrival(double now) {
    q_.push(now + arrivals_.next_gap(), EventKind::node_idle, 0);
    ++recorder_.summary().arrivals;
    std::optional<NodeId> id = arrivals_.pick(unavailable_);
    if (!id) {
      ++recorder_.summary().lost_arrivals;
      return;
    }
    unavailable_[*id - 1] = true;
    ready_.push_back(*id);
    fill_round(now);
  }

  // Starts a round when enough nodes are ready, or tops up a running round
  // that lost members.
  void fill_round(double now) {
    if (!in_round_) {
      if (ready_.size() < cfg_.round_size) return;
      in_round_ = true;
      round_ = RoundRecord{now, now, {}, 0};
      uploads_.clear();
      vacancies_ = cfg_.round_size;
    }
    while (vacancies_ > 0 && !ready_.empty()) {
      NodeId id = ready_.front();
      ready_.pop_front();
      --vacancies_;
      start_member(now, id);
    }
  }

  void start_member(double now, NodeId id) {
    const double d0 = w_.delay(id).d0;
    if (!arrivals_.succeeds()) {
      ++recorder_.summary().failed_iterations;
      q_.push(now + cfg_.retry_factor * d0, EventKind::round_timeout, id);
      return;
    }
    LocalUpdate u = local_update(w_.node(id), global_, cfg_.train(), node_rng_[id - 1]);
    q_.push(now + d0, EventKind::iteration_complete, id,
            Payload{std::move(u.model), now, u.train_loss});
  }

  void on_member_failed(double now, NodeId id) {
    unavailable_[id - 1] = false;
    ++round_.failures;
    ++vacancies_;
    fill_round(now);
  }

  void on_upload(Queue::Event& e) {
    unavailable_[e.node - 1] = false;
    Payload& p = e.payload;
    recorder_.completed(e.node, p.start, e.at - p.start, p.train_loss);
    round_.member_delays.push_back(e.at - p.start);
    uploads_.push_back(std::move(*p.model));
    if (uploads_.size() < cfg_.round_size) return;

    global_ = google_fl_aggregate(uploads_);
    round_.end = e.at;
    result_.rounds.push_back(round_);
    ++recorder_.summary().rounds;
    in_round_ = false;
    last_progress_ = e.at;
    Evaluation ev = evaluate(global_, w_.test);
    recorder_.set_quality(ev.accuracy, ev.loss);
    if (cfg_.max_iterations > 0 && recorder_.iterations() >= cfg_.max_iterations) {
      stop_ = true;
      return;
    }
    fill_round(e.at);
  }

  const World& w_;
  const ExperimentConfig& cfg_;
  ArrivalProcess arrivals_;
  RunRecorder recorder_;
  Queue q_;
  std::vector<Rng> node_rng_;
  // Busy training or waiting in the ready queue.
  std::vector<bool> unavailable_;
  std::deque<NodeId> ready_;
  ModelParams global_;
  bool in_round_ = false;
  std::size_t vacancies_ = 0;
  RoundRecord round_;
  std::vector<ModelParams> uploads_;
  double last_progress_ = 0.0;
  bool stop_ = false;
  RunResult result_;
};

}  // namespace

RunResult run_google_fl(const World& world) { return GoogleRun(world).run(); }

}  // namespace dagfl

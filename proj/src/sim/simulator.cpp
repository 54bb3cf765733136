// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/sim/simulator.hpp"

#include <limits>
#include <stdexcept>

#include "dagfl/analysis/anomaly.hpp"
#include "dagfl/analysis/tips.hpp"
#include "dagfl/baselines/async_fl.hpp"
#include "dagfl/baselines/block_fl.hpp"
#include "dagfl/baselines/google_fl.hpp"
#include "dagfl/sim/event_queue.hpp"

namespace dagfl {

namespace {

enum Stream : std::uint64_t { kArrivals = 100, kAgent, kSyncPhase, kNodeRng = 5000 };

struct Payload {
  TransactionPtr tx;
  double start = 0.0;
  std::optional<double> train_loss;
};

class DagFlRun {
 public:
  explicit DagFlRun(const World& w)
      : w_(w),
        cfg_(w.cfg),
        protocol_(cfg_.protocol()),
        agent_cfg_(cfg_.agent()),
        global_(std::make_shared<Dag>(kAgentNode, cfg_.k, w.keys)),
        agent_dag_(kAgentNode, cfg_.k, w.keys),
        arrivals_(cfg_.lambda, cfg_.p, derive_seed(cfg_.seed, kArrivals)),
        agent_rng_(derive_seed(cfg_.seed, kAgent)),
        recorder_(w, SystemKind::dagfl),
        busy_(w.size(), false),
        cursor_(w.size(), 0),
        sync_lag_(transfer_delay(cfg_, cfg_.tx_bits)) {
    for (const auto& n : w.nodes) {
      local_.emplace_back(n.id, cfg_.k, w.keys);
      node_rng_.emplace_back(derive_seed(cfg_.seed, kNodeRng + n.id));
    }
    current_model_ = w.initial_model;
  }

  RunResult run() {
    publish_genesis();

    q_.push(arrivals_.next_gap(), EventKind::node_idle, 0);
    Rng phase_rng(derive_seed(cfg_.seed, kSyncPhase));
    std::uniform_real_distribution<double> phase(0.0, cfg_.sync_interval);
    for (const auto& n : w_.nodes) q_.push(phase(phase_rng), EventKind::sync_dag, n.id);
    q_.push(cfg_.poll_interval, EventKind::agent_poll, kAgentNode);
    q_.push(0.0, EventKind::metrics_sample, kAgentNode);

    double end_time = cfg_.duration;
    std::string reason = "duration";
    while (!q_.empty()) {
      if (q_.top().at > cfg_.duration) break;
      if (q_.top().at - last_publication_ > cfg_.watchdog) {
        end_time = last_publication_ + cfg_.watchdog;
        reason = "starvation";
        recorder_.summary().diagnostic =
            "no transaction published for " + format_double(cfg_.watchdog) + " s";
        break;
      }
      auto e = q_.pop();
      if (cfg_.record_trace) result_.event_times.push_back(e.at);
      if (e.kind == EventKind::end_signal) {
        end_time = e.at;
        reason = "end_signal";
        break;
      }
      handle(e);
      if (cfg_.max_iterations > 0 && recorder_.iterations() >= cfg_.max_iterations) {
        end_time = e.at;
        reason = "max_iterations";
        break;
      }
    }

    // Final read-out by the agent, unless its last poll already ended the run.
    if (reason != "end_signal") agent_poll_once(end_time);
    finalize(end_time, reason);
    return std::move(result_);
  }

 private:
  using Queue = EventQueue<Payload>;

  void publish_genesis() {
    TransactionPtr genesis =
        make_transaction(kAgentNode, 0.0, w_.initial_model, {}, w_.agent_key);
    append_or_throw(*global_, genesis);
    append_or_throw(agent_dag_, genesis);
    for (auto& d : local_) append_or_throw(d, genesis);
    std::fill(cursor_.begin(), cursor_.end(), 1);
    agent_cursor_ = 1;
  }

  static void append_or_throw(Dag& dag, const TransactionPtr& tx) {
    if (auto err = dag.append(tx)) {
      throw std::logic_error("dag append rejected: " + std::string(describe(*err)));
    }
  }

  // Pulls every global transaction published at or before now - sync_lag.
  void pull(Dag& dag, std::size_t& cursor, NodeId node, double now) {
    auto txs = global_->transactions();
    const double cutoff = now - sync_lag_;
    for (; cursor < txs.size() && txs[cursor]->published_at <= cutoff; ++cursor) {
      if (dag.contains(txs[cursor]->id)) continue;
      append_or_throw(dag, txs[cursor]);
      if (cfg_.record_trace) {
        result_.visibility.push_back({node, txs[cursor]->id, txs[cursor]->published_at, now});
      }
    }
  }

  void handle(const Queue::Event& e) {
    switch (e.kind) {
      case EventKind::node_idle: on_arrival(e.at); break;
      case EventKind::iteration_complete: on_complete(e); break;
      case EventKind::sync_dag:
        pull(local_[e.node - 1], cursor_[e.node - 1], e.node, e.at);
        q_.push(e.at + cfg_.sync_interval, EventKind::sync_dag, e.node);
        break;
      case EventKind::agent_poll:
        if (agent_poll_once(e.at)) q_.push(e.at, EventKind::end_signal, kAgentNode);
        q_.push(e.at + cfg_.poll_interval, EventKind::agent_poll, kAgentNode);
        break;
      case EventKind::metrics_sample: {
        double next = recorder_.sample(e.at, global_->tips(e.at, cfg_.tau_max).size());
        q_.push(next, EventKind::metrics_sample, kAgentNode);
        break;
      }
      default: throw std::logic_error("unexpected event kind");
    }
  }

  void on_arrival(double now) {
    q_.push(now + arrivals_.next_gap(), EventKind::node_idle, 0);
    RunSummary& s = recorder_.summary();
    ++s.arrivals;
    std::optional<NodeId> picked = arrivals_.pick(busy_);
    if (!picked) {
      ++s.lost_arrivals;
      return;
    }
    const NodeId id = *picked;
    const double h = w_.delay(id).h;
    busy_[id - 1] = true;
    if (!arrivals_.succeeds()) {
      ++s.failed_iterations;
      q_.push(now + h, EventKind::iteration_complete, id, Payload{nullptr, now, std::nullopt});
      return;
    }
    // A node brings its local DAG up to date before choosing tips.
    pull(local_[id - 1], cursor_[id - 1], id, now);
    IterationResult r = node_iteration(w_.node(id), local_[id - 1], now, h, protocol_, *w_.keys,
                                       node_rng_[id - 1]);
    if (r.aborted) {
      ++s.aborted_iterations;
      busy_[id - 1] = false;
      return;
    }
    q_.push(now + h, EventKind::iteration_complete, id, Payload{r.tx, now, r.train_loss});
  }

  void on_complete(const Queue::Event& e) {
    busy_[e.node - 1] = false;
    const Payload& p = e.payload;
    if (!p.tx) return;
    append_or_throw(*global_, p.tx);
    append_or_throw(local_[e.node - 1], p.tx);
    if (cfg_.record_trace) result_.visibility.push_back({e.node, p.tx->id, e.at, e.at});
    last_publication_ = e.at;
    recorder_.completed(e.node, p.start, e.at - p.start, p.train_loss);
  }

  bool agent_poll_once(double now) {
    pull(agent_dag_, agent_cursor_, kAgentNode, now);
    AgentPollResult r = agent_poll(agent_cfg_, agent_dag_, now, w_.test, *w_.keys, agent_rng_);
    if (r.starved) return false;
    recorder_.set_quality(r.accuracy, r.loss);
    current_model_ = std::move(*r.model);
    return r.finished;
  }

  void finalize(double end_time, const std::string& reason) {
    RunSummary& s = recorder_.summary();
    s.transactions = global_->size() - 1;
    AnomalyReport rep = anomaly_report(*global_, cfg_.m_threshold, w_.size(), w_.abnormal);
    s.contribution = rep.rates;
    s.r = rep.r;
    s.r0 = rep.r0;
    s.r0_over_r = rep.r0_over_r;
    s.undefined_rates = rep.undefined;

    std::size_t tips_now = global_->tips(end_time, cfg_.tau_max).size();
    result_.log = recorder_.finish(end_time, reason, current_model_, tips_now);
    RunSummary& fs = result_.log.summary;
    if (end_time > 0.0) {
      fs.mean_tips = measure_tips(result_.log.rows, end_time / 2.0, end_time);
    } else {
      fs.mean_tips = static_cast<double>(tips_now);
    }
    if (cfg_.k >= 2 && fs.mean_interarrival > 0.0 && fs.mean_delay > 0.0) {
      fs.predicted_tips = expected_tips(cfg_.k, 1.0 / fs.mean_interarrival, fs.mean_delay);
    }
    result_.final_model = current_model_;
    result_.dag = global_;
  }

  const World& w_;
  const ExperimentConfig& cfg_;
  ProtocolConfig protocol_;
  AgentConfig agent_cfg_;
  std::shared_ptr<Dag> global_;
  Dag agent_dag_;
  std::vector<Dag> local_;
  std::vector<Rng> node_rng_;
  ArrivalProcess arrivals_;
  Rng agent_rng_;
  RunRecorder recorder_;
  Queue q_;
  std::vector<bool> busy_;
  std::vector<std::size_t> cursor_;
  std::size_t agent_cursor_ = 0;
  double sync_lag_;
  double last_publication_ = 0.0;
  ModelParams current_model_;
  RunResult result_;
};

}  // namespace

RunResult run_dagfl(const World& world) { return DagFlRun(world).run(); }

RunResult run(const World& world) {
  switch (world.cfg.system) {
    case SystemKind::dagfl: return run_dagfl(world);
    case SystemKind::google: return run_google_fl(world);
    case SystemKind::async: return run_async_fl(world);
    case SystemKind::blockfl: return run_block_fl(world, nullptr);
  }
  throw std::logic_error("unknown system");
}

RunResult run(const ExperimentConfig& cfg) {
  World world = build_world(cfg);
  return run(world);
}

}  // namespace dagfl

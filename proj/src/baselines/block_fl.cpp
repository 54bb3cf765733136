// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/baselines/block_fl.hpp"

#include <stdexcept>

#include "dagfl/sim/event_queue.hpp"

namespace dagfl {

std::string_view block_event_name(BlockEventKind k) {
  switch (k) {
    case BlockEventKind::accepted: return "accepted";
    case BlockEventKind::rejected: return "rejected";
    case BlockEventKind::pow_started: return "pow_started";
    case BlockEventKind::block_published: return "block_published";
    case BlockEventKind::buffer_dropped: return "buffer_dropped";
  }
  return "unknown";
}

MinerPool::MinerPool(std::size_t miners, std::size_t block_size, double block_timeout,
                     Hooks hooks)
    : block_size_(block_size),
      block_timeout_(block_timeout),
      hooks_(std::move(hooks)),
      state_(miners) {
  if (miners == 0 || block_size == 0 || !(block_timeout > 0.0)) {
    throw std::invalid_argument("miner pool needs miners, block size and timeout");
  }
}

void MinerPool::accept(double now, std::size_t m, Upload upload) {
  Miner& s = state_.at(m);
  if (s.buffer.empty()) {
    s.opened = now;
    if (!s.mining) hooks_.schedule_timeout(now + block_timeout_, m, ++s.timeout_token);
  }
  s.buffer.push_back(std::move(upload));
  trace_.push_back({now, m, BlockEventKind::accepted, s.buffer.size(), {}});
  if (!s.mining && s.buffer.size() >= block_size_) start_pow(now, m, "size");
}

void MinerPool::reject(double now, std::size_t m) {
  trace_.push_back({now, m, BlockEventKind::rejected, state_.at(m).buffer.size(), {}});
}

void MinerPool::on_timeout(double now, std::size_t m, std::uint64_t token) {
  Miner& s = state_.at(m);
  if (token != s.timeout_token || s.mining || s.buffer.empty()) return;
  start_pow(now, m, "timeout");
}

std::optional<std::vector<Upload>> MinerPool::on_pow_done(double now, std::size_t m,
                                                          std::uint64_t token) {
  Miner& winner = state_.at(m);
  if (!winner.mining || token != winner.pow_token) return std::nullopt;
  std::vector<Upload> block = std::move(winner.sealed);
  winner.sealed.clear();
  winner.mining = false;
  ++winner.pow_token;
  trace_.push_back({now, m, BlockEventKind::block_published, block.size(), {}});
  for (std::size_t o = 0; o < state_.size(); ++o) {
    Miner& s = state_[o];
    if (o == m || !s.mining) continue;
    dropped_ += s.sealed.size();
    trace_.push_back({now, o, BlockEventKind::buffer_dropped, s.sealed.size(), {}});
    s.sealed.clear();
    s.mining = false;
    ++s.pow_token;
  }
  for (std::size_t o = 0; o < state_.size(); ++o) {
    if (!state_[o].mining) resume(now, o);
  }
  return block;
}

void MinerPool::start_pow(double now, std::size_t m, std::string_view cause) {
  Miner& s = state_[m];
  s.sealed = std::move(s.buffer);
  s.buffer.clear();
  s.mining = true;
  ++s.timeout_token;
  trace_.push_back({now, m, BlockEventKind::pow_started, s.sealed.size(), cause});
  hooks_.schedule_pow(now + hooks_.pow_duration(), m, ++s.pow_token);
}

void MinerPool::resume(double now, std::size_t m) {
  Miner& s = state_[m];
  if (s.buffer.empty()) return;
  if (s.buffer.size() >= block_size_) {
    start_pow(now, m, "size");
  } else if (now >= s.opened + block_timeout_) {
    start_pow(now, m, "timeout");
  } else {
    hooks_.schedule_timeout(s.opened + block_timeout_, m, ++s.timeout_token);
  }
}

namespace {

enum Stream : std::uint64_t { kArrivals = 100, kPow = 102, kNodeRng = 5000 };

struct Payload {
  std::optional<ModelParams> model;
  double start = 0.0;
  std::optional<double> train_loss;
  std::uint64_t token = 0;
};

class BlockRun {
 public:
  explicit BlockRun(const World& w)
      : w_(w),
        cfg_(w.cfg),
        arrivals_(cfg_.lambda, cfg_.p, derive_seed(cfg_.seed, kArrivals)),
        pow_rng_(derive_seed(cfg_.seed, kPow)),
        pow_draw_(1.0 / cfg_.pow_mean),
        recorder_(w, SystemKind::blockfl),
        busy_(w.size(), false),
        global_(w.initial_model),
        pool_(cfg_.miners, cfg_.block_size, cfg_.block_timeout,
              MinerPool::Hooks{
                  [this] { return pow_draw_(pow_rng_); },
                  [this](double at, std::size_t m, std::uint64_t token) {
                    q_.push(at, EventKind::block_timeout, static_cast<NodeId>(m),
                            Payload{std::nullopt, 0.0, std::nullopt, token});
                  },
                  [this](double at, std::size_t m, std::uint64_t token) {
                    q_.push(at, EventKind::pow_done, static_cast<NodeId>(m),
                            Payload{std::nullopt, 0.0, std::nullopt, token});
                  }}) {
    for (const auto& n : w.nodes) node_rng_.emplace_back(derive_seed(cfg_.seed, kNodeRng + n.id));
    global_accuracy_ = evaluate(global_, w.test).accuracy;
  }

  RunResult run(std::vector<BlockTraceEvent>* trace) {
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
            "no block published for " + format_double(cfg_.watchdog) + " s";
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
    recorder_.summary().dropped_uploads = pool_.dropped();
    result_.log = recorder_.finish(end_time, reason, global_, 0);
    result_.final_model = global_;
    if (trace != nullptr) *trace = pool_.trace();
    return std::move(result_);
  }

 private:
  using Queue = EventQueue<Payload>;

  void handle(Queue::Event& e) {
    switch (e.kind) {
      case EventKind::node_idle: on_arrival(e.at); break;
      case EventKind::iteration_complete: on_upload(e); break;
      case EventKind::block_timeout: pool_.on_timeout(e.at, e.node, e.payload.token); break;
      case EventKind::pow_done: {
        auto block = pool_.on_pow_done(e.at, e.node, e.payload.token);
        if (block && !block->empty()) publish(e.at, *block);
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
      q_.push(now + d0, EventKind::iteration_complete, *id, Payload{});
      return;
    }
    LocalUpdate u = local_update(w_.node(*id), global_, cfg_.train(), node_rng_[*id - 1]);
    q_.push(now + d0, EventKind::iteration_complete, *id,
            Payload{std::move(u.model), now, u.train_loss, 0});
  }

  void on_upload(Queue::Event& e) {
    busy_[e.node - 1] = false;
    Payload& p = e.payload;
    if (!p.model) return;
    recorder_.completed(e.node, p.start, e.at - p.start, p.train_loss);
    const std::size_t miner = (e.node - 1) % cfg_.miners;
    if (evaluate(*p.model, w_.test).accuracy < cfg_.miner_floor * global_accuracy_) {
      pool_.reject(e.at, miner);
      return;
    }
    pool_.accept(e.at, miner, Upload{e.node, e.at, std::move(*p.model)});
  }

  void publish(double now, const std::vector<Upload>& block) {
    std::vector<const ModelParams*> models;
    for (const auto& u : block) models.push_back(&u.model);
    global_ = federated_average(models);
    Evaluation ev = evaluate(global_, w_.test);
    global_accuracy_ = ev.accuracy;
    recorder_.set_quality(ev.accuracy, ev.loss);
    ++recorder_.summary().blocks;
    last_progress_ = now;
  }

  const World& w_;
  const ExperimentConfig& cfg_;
  ArrivalProcess arrivals_;
  Rng pow_rng_;
  std::exponential_distribution<double> pow_draw_;
  RunRecorder recorder_;
  Queue q_;
  std::vector<Rng> node_rng_;
  std::vector<bool> busy_;
  ModelParams global_;
  double global_accuracy_ = 0.0;
  double last_progress_ = 0.0;
  MinerPool pool_;
  RunResult result_;
};

}  // namespace

RunResult run_block_fl(const World& world, std::vector<BlockTraceEvent>* trace) {
  return BlockRun(world).run(trace);
}

}  // namespace dagfl

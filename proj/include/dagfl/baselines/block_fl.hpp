// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "dagfl/sim/engine.hpp"

namespace dagfl {

struct Upload {
  NodeId node = 0;
  double at = 0.0;
  ModelParams model;
};

enum class BlockEventKind { accepted, rejected, pow_started, block_published, buffer_dropped };

std::string_view block_event_name(BlockEventKind k);

struct BlockTraceEvent {
  double time = 0.0;
  std::size_t miner = 0;
  BlockEventKind kind = BlockEventKind::accepted;
  // Transactions involved: buffered after an accept, sealed for PoW, in the
  // block, or dropped.
  std::size_t count = 0;
  // "size" or "timeout" for pow_started, empty otherwise.
  std::string_view cause;
};

// Miner buffers and the PoW race, without any notion of training. The owner
// delivers timer and PoW completions back through on_timeout/on_pow_done
// with the token it was handed.
//
// A miner opens a buffer with its first accepted upload. It starts PoW as
// soon as the buffer holds block_size uploads, or block_timeout after the
// buffer opened, whichever comes first. Starting PoW seals the buffer;
// uploads arriving meanwhile open a new one. The first miner to finish
// publishes its sealed buffer as a block and every other miner still mining
// drops its sealed buffer.
class MinerPool {
 public:
  struct Hooks {
    std::function<double()> pow_duration;
    // (time, miner, token) for a buffer timeout and a PoW completion.
    std::function<void(double, std::size_t, std::uint64_t)> schedule_timeout;
    std::function<void(double, std::size_t, std::uint64_t)> schedule_pow;
  };

  MinerPool(std::size_t miners, std::size_t block_size, double block_timeout, Hooks hooks);

  void accept(double now, std::size_t miner, Upload upload);
  void reject(double now, std::size_t miner);
  void on_timeout(double now, std::size_t miner, std::uint64_t token);
  // The published block when this completion wins; nullopt for a stale or
  // cancelled PoW.
  std::optional<std::vector<Upload>> on_pow_done(double now, std::size_t miner,
                                                 std::uint64_t token);

  std::size_t miners() const { return state_.size(); }
  bool mining(std::size_t miner) const { return state_.at(miner).mining; }
  std::size_t buffered(std::size_t miner) const { return state_.at(miner).buffer.size(); }
  std::size_t dropped() const { return dropped_; }
  const std::vector<BlockTraceEvent>& trace() const { return trace_; }

 private:
  struct Miner {
    std::vector<Upload> buffer;
    double opened = 0.0;
    std::vector<Upload> sealed;
    bool mining = false;
    std::uint64_t timeout_token = 0;
    std::uint64_t pow_token = 0;
  };

  void start_pow(double now, std::size_t m, std::string_view cause);
  void resume(double now, std::size_t m);

  std::size_t block_size_;
  double block_timeout_;
  Hooks hooks_;
  std::vector<Miner> state_;
  std::size_t dropped_ = 0;
  std::vector<BlockTraceEvent> trace_;
};

// Block FL: node i uploads to miner (i - 1) mod miners. A miner rejects a
// model whose test accuracy is below miner_floor times the current global
// accuracy. Each block's average replaces the global model. Dropped
// uploads are not retried.
RunResult run_block_fl(const World& world, std::vector<BlockTraceEvent>* trace = nullptr);

}  // namespace dagfl

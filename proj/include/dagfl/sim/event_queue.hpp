// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <vector>

#include "dagfl/ledger/auth.hpp"

namespace dagfl {

// Event priorities; smaller runs first among events at the same time.
enum class EventKind : int {
  end_signal = 0,
  iteration_complete = 1,
  sync_dag = 2,
  agent_poll = 3,
  node_idle = 4,
  // Baseline-specific events sit between the protocol events and sampling.
  round_timeout = 5,
  pow_done = 6,
  block_timeout = 7,
  metrics_sample = 8,
};

// Min-queue over (time, kind, node, insertion sequence). pop() rejects
// time travel.
template <class Payload>
class EventQueue {
 public:
  struct Event {
    double at = 0.0;
    EventKind kind = EventKind::node_idle;
    NodeId node = 0;
    std::uint64_t seq = 0;
    Payload payload{};
  };

  void push(double at, EventKind kind, NodeId node, Payload payload = {}) {
    if (at < now_) throw std::logic_error("event scheduled in the past");
    heap_.push(Event{at, kind, node, next_seq_++, std::move(payload)});
  }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  const Event& top() const { return heap_.top(); }
  double now() const { return now_; }

  Event pop() {
    Event e = heap_.top();
    heap_.pop();
    if (e.at < now_) throw std::logic_error("event queue went back in time");
    now_ = e.at;
    return e;
  }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.at != b.at) return a.at > b.at;
      if (a.kind != b.kind) return static_cast<int>(a.kind) > static_cast<int>(b.kind);
      if (a.node != b.node) return a.node > b.node;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_seq_ = 0;
  double now_ = 0.0;
};

}  // namespace dagfl

// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dagfl/data/shard.hpp"
#include "dagfl/ledger/transaction.hpp"

namespace dagfl {

enum class AppendError {
  duplicate_id,
  dangling_approval,
  duplicate_approval,
  wrong_approval_count,
  not_earlier,
  bad_auth_tag,
};

std::string_view describe(AppendError e);

// A node-local, append-only DAG of transactions.
//
// Non-genesis transactions approve between 1 and k distinct, strictly
// earlier transactions (fewer than k only when the publisher could not find
// k candidates). The first transaction with an empty approval list is the
// genesis; later empty lists are rejected.
class Dag {
 public:
  // keys == nullptr skips auth-tag verification on append.
  Dag(NodeId owner, std::size_t k, std::shared_ptr<const KeyRegistry> keys = nullptr);

  // Stores tx and bumps the approval count of every transaction it approves.
  // On error nothing changes.
  std::optional<AppendError> append(TransactionPtr tx);

  NodeId owner() const { return owner_; }
  std::size_t k() const { return k_; }
  std::size_t size() const { return txs_.size(); }
  bool empty() const { return txs_.empty(); }
  bool contains(TransactionId id) const { return index_.contains(id); }

  // nullptr when absent.
  const Transaction* find(TransactionId id) const;
  TransactionPtr get(TransactionId id) const;
  std::size_t approval_count(TransactionId id) const;

  // Insertion order.
  std::span<const TransactionPtr> transactions() const { return txs_; }
  const Transaction* genesis() const;

  // Unapproved transactions with (now - published_at) <= tau_max, ordered by
  // (published_at, id). The genesis is exempt from the staleness bound while
  // no other tip exists.
  std::vector<TransactionId> tips(double now, double tau_max) const;

  // Uniform random subset of tips(now, tau_max) of size min(alpha, |tips|),
  // listed in tips() order.
  std::vector<TransactionId> select_candidate_tips(double now, double tau_max,
                                                   std::size_t alpha, Rng& rng) const;

  // Up to n most recently published transactions, newest first.
  std::vector<TransactionId> latest(std::size_t n) const;

  // Share of node's transactions with more than m approvals; nullopt when
  // node has published nothing.
  std::optional<double> contribution_rate(NodeId node, std::size_t m) const;

  std::span<const std::size_t> published_by(NodeId node) const;

  std::size_t total_approvals() const;

  // One JSON object per line: id, publisher, published_at, approves,
  // approval_count.
  void write_dump(std::ostream& out) const;

 private:
  NodeId owner_;
  std::size_t k_;
  std::shared_ptr<const KeyRegistry> keys_;
  std::vector<TransactionPtr> txs_;
  std::vector<std::size_t> approvals_;
  std::unordered_map<TransactionId, std::size_t> index_;
  std::unordered_map<NodeId, std::vector<std::size_t>> by_publisher_;
  std::set<std::pair<double, TransactionId>> unapproved_;
  std::optional<std::size_t> genesis_;
};

// Uniform subset without replacement; keeps the input order.
std::vector<TransactionId> sample_without_replacement(std::span<const TransactionId> ids,
                                                      std::size_t count, Rng& rng);

}  // namespace dagfl

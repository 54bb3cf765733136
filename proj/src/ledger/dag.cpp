// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/ledger/dag.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <ostream>

#include "json.hpp"

namespace dagfl {

std::string_view describe(AppendError e) {
  switch (e) {
    case AppendError::duplicate_id: return "duplicate transaction id";
    case AppendError::dangling_approval: return "approval references unknown transaction";
    case AppendError::duplicate_approval: return "duplicate approval target";
    case AppendError::wrong_approval_count: return "wrong approval count";
    case AppendError::not_earlier: return "approved transaction is not strictly earlier";
    case AppendError::bad_auth_tag: return "authentication tag does not verify";
  }
  return "unknown append error";
}

Dag::Dag(NodeId owner, std::size_t k, std::shared_ptr<const KeyRegistry> keys)
    : owner_(owner), k_(k), keys_(std::move(keys)) {}

std::optional<AppendError> Dag::append(TransactionPtr tx) {
  if (index_.contains(tx->id)) return AppendError::duplicate_id;
  const auto& approves = tx->approves;
  if (approves.empty()) {
    if (genesis_) return AppendError::wrong_approval_count;
  } else if (approves.size() > k_) {
    return AppendError::wrong_approval_count;
  }
  for (std::size_t i = 0; i < approves.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (approves[i] == approves[j]) return AppendError::duplicate_approval;
    }
    auto it = index_.find(approves[i]);
    if (it == index_.end()) return AppendError::dangling_approval;
    if (!(txs_[it->second]->published_at < tx->published_at)) return AppendError::not_earlier;
  }
  if (keys_) {
    auto key = keys_->find(tx->publisher);
    if (!key || !verify_transaction(*tx, *key)) return AppendError::bad_auth_tag;
  }

  const std::size_t pos = txs_.size();
  for (TransactionId a : approves) {
    std::size_t target = index_.at(a);
    if (approvals_[target]++ == 0) {
      unapproved_.erase({txs_[target]->published_at, a});
    }
  }
  if (approves.empty()) genesis_ = pos;
  index_.emplace(tx->id, pos);
  by_publisher_[tx->publisher].push_back(pos);
  unapproved_.emplace(tx->published_at, tx->id);
  approvals_.push_back(0);
  txs_.push_back(std::move(tx));
  return std::nullopt;
}

const Transaction* Dag::find(TransactionId id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : txs_[it->second].get();
}

TransactionPtr Dag::get(TransactionId id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : txs_[it->second];
}

std::size_t Dag::approval_count(TransactionId id) const {
  auto it = index_.find(id);
  return it == index_.end() ? 0 : approvals_[it->second];
}

const Transaction* Dag::genesis() const {
  return genesis_ ? txs_[*genesis_].get() : nullptr;
}

std::vector<TransactionId> Dag::tips(double now, double tau_max) const {
  std::vector<TransactionId> out;
  const Transaction* gen = genesis();
  bool genesis_unapproved = gen != nullptr && approvals_[*genesis_] == 0;
  bool genesis_fresh = false;

  // Start a little early and apply the exact predicate per element, so the
  // result matches a full rescan bit for bit.
  double lo = now - tau_max;
  lo -= std::abs(lo) * 1e-12 + 1e-12;
  for (auto it = unapproved_.lower_bound({lo, TransactionId{0}}); it != unapproved_.end(); ++it) {
    if (!(now - it->first <= tau_max)) continue;
    if (gen != nullptr && it->second == gen->id) {
      genesis_fresh = true;
      continue;
    }
    out.push_back(it->second);
  }
  if (genesis_unapproved && (genesis_fresh || out.empty())) {
    auto key = std::pair{gen->published_at, gen->id};
    auto pos = std::lower_bound(out.begin(), out.end(), key, [&](TransactionId id, const auto& k) {
      const Transaction* t = find(id);
      return std::pair{t->published_at, id} < k;
    });
    out.insert(pos, gen->id);
  }
  return out;
}

std::vector<TransactionId> sample_without_replacement(std::span<const TransactionId> ids,
                                                      std::size_t count, Rng& rng) {
  std::vector<TransactionId> out;
  out.reserve(std::min(count, ids.size()));
  std::sample(ids.begin(), ids.end(), std::back_inserter(out), count, rng);
  return out;
}

std::vector<TransactionId> Dag::select_candidate_tips(double now, double tau_max,
                                                      std::size_t alpha, Rng& rng) const {
  auto t = tips(now, tau_max);
  return sample_without_replacement(t, alpha, rng);
}

std::vector<TransactionId> Dag::latest(std::size_t n) const {
  std::vector<std::size_t> order(txs_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto newer = [&](std::size_t a, std::size_t b) {
    return std::pair{txs_[a]->published_at, txs_[a]->id} > std::pair{txs_[b]->published_at, txs_[b]->id};
  };
  std::size_t take = std::min(n, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(), newer);
  std::vector<TransactionId> out;
  for (std::size_t i = 0; i < take; ++i) out.push_back(txs_[order[i]]->id);
  return out;
}

std::span<const std::size_t> Dag::published_by(NodeId node) const {
  auto it = by_publisher_.find(node);
  if (it == by_publisher_.end()) return {};
  return it->second;
}

std::optional<double> Dag::contribution_rate(NodeId node, std::size_t m) const {
  auto mine = published_by(node);
  if (mine.empty()) return std::nullopt;
  std::size_t contributing = 0;
  for (std::size_t pos : mine) {
    if (approvals_[pos] > m) ++contributing;
  }
  return static_cast<double>(contributing) / static_cast<double>(mine.size());
}

std::size_t Dag::total_approvals() const {
  std::size_t sum = 0;
  for (std::size_t a : approvals_) sum += a;
  return sum;
}

void Dag::write_dump(std::ostream& out) const {
  for (std::size_t i = 0; i < txs_.size(); ++i) {
    const Transaction& tx = *txs_[i];
    nlohmann::json j;
    j["id"] = to_hex(tx.id);
    j["publisher"] = tx.publisher;
    j["published_at"] = tx.published_at;
    auto approves = nlohmann::json::array();
    for (TransactionId a : tx.approves) approves.push_back(to_hex(a));
    j["approves"] = std::move(approves);
    j["approval_count"] = approvals_[i];
    out << j.dump() << '\n';
  }
}

}  // namespace dagfl

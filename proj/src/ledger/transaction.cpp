// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/ledger/transaction.hpp"

#include <cstdio>

#include "dagfl/ledger/hash.hpp"

namespace dagfl {

std::string to_hex(TransactionId id) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(id.value));
  return buf;
}

std::uint64_t model_digest(const ModelParams& model) {
  Fnv1a h;
  h.update_value(static_cast<std::uint64_t>(model.shape.inputs));
  h.update_value(static_cast<std::uint64_t>(model.shape.hidden));
  h.update_value(static_cast<std::uint64_t>(model.shape.classes));
  h.update(std::as_bytes(std::span<const double>(model.values)));
  return h.digest();
}

TransactionId compute_transaction_id(NodeId publisher, double published_at,
                                     std::uint64_t digest,
                                     const std::vector<TransactionId>& approves) {
  Fnv1a h;
  h.update_value(publisher);
  h.update_value(published_at);
  h.update_value(digest);
  for (TransactionId a : approves) h.update_value(a.value);
  return {mix64(h.digest())};
}

std::uint64_t auth_content_digest(NodeId publisher, std::uint64_t digest,
                                  const std::vector<TransactionId>& approves) {
  Fnv1a h;
  h.update_value(publisher);
  h.update_value(digest);
  h.update_value(static_cast<std::uint64_t>(approves.size()));
  for (TransactionId a : approves) h.update_value(a.value);
  return h.digest();
}

TransactionPtr make_transaction(NodeId publisher, double published_at, ModelParams model,
                                std::vector<TransactionId> approves, const AuthKey& key) {
  auto tx = std::make_shared<Transaction>();
  std::uint64_t digest = model_digest(model);
  tx->id = compute_transaction_id(publisher, published_at, digest, approves);
  tx->publisher = publisher;
  tx->published_at = published_at;
  tx->auth_tag = make_auth_tag(key, auth_content_digest(publisher, digest, approves));
  tx->model = std::move(model);
  tx->approves = std::move(approves);
  return tx;
}

bool verify_transaction(const Transaction& tx, const AuthKey& key) {
  std::uint64_t digest = model_digest(tx.model);
  return verify_auth_tag(key, auth_content_digest(tx.publisher, digest, tx.approves), tx.auth_tag);
}

}  // namespace dagfl

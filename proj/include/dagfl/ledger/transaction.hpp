// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dagfl/ledger/auth.hpp"
#include "dagfl/model/model.hpp"

namespace dagfl {

inline constexpr NodeId kAgentNode = 0;

struct TransactionId {
  std::uint64_t value = 0;
  auto operator<=>(const TransactionId&) const = default;
};

std::string to_hex(TransactionId id);

std::uint64_t model_digest(const ModelParams& model);

// Content hash of (publisher, published_at, model digest, approves).
TransactionId compute_transaction_id(NodeId publisher, double published_at,
                                     std::uint64_t model_digest,
                                     const std::vector<TransactionId>& approves);

// What the auth tag binds: publisher, model digest and approval list.
std::uint64_t auth_content_digest(NodeId publisher, std::uint64_t model_digest,
                                  const std::vector<TransactionId>& approves);

struct Transaction {
  TransactionId id;
  NodeId publisher = 0;
  double published_at = 0.0;
  ModelParams model;
  std::vector<TransactionId> approves;
  AuthTag auth_tag;

  bool is_genesis() const { return approves.empty(); }
};

using TransactionPtr = std::shared_ptr<const Transaction>;

// Builds a signed transaction with a content-derived id.
TransactionPtr make_transaction(NodeId publisher, double published_at, ModelParams model,
                                std::vector<TransactionId> approves, const AuthKey& key);

// Recomputes digests from content; false on any mismatch with the stored tag.
bool verify_transaction(const Transaction& tx, const AuthKey& key);

}  // namespace dagfl

template <>
struct std::hash<dagfl::TransactionId> {
  std::size_t operator()(dagfl::TransactionId id) const noexcept {
    return static_cast<std::size_t>(id.value);
  }
};

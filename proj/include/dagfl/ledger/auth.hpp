// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace dagfl {

using NodeId = std::uint32_t;

// Symmetric stand-in for a signing key pair. A registry maps each node to
// its key so any verifier can check a claimed publisher.
struct AuthKey {
  std::uint64_t secret = 0;
  bool operator==(const AuthKey&) const = default;
};

struct AuthTag {
  std::uint64_t value = 0;
  bool operator==(const AuthTag&) const = default;
};

AuthTag make_auth_tag(const AuthKey& key, std::uint64_t content_digest);
bool verify_auth_tag(const AuthKey& key, std::uint64_t content_digest, AuthTag tag);

class KeyRegistry {
 public:
  KeyRegistry() = default;
  explicit KeyRegistry(std::vector<AuthKey> keys) : keys_(std::move(keys)) {}

  // Key for node id; nullopt for unknown nodes.
  std::optional<AuthKey> find(NodeId node) const {
    if (node >= keys_.size()) return std::nullopt;
    return keys_[node];
  }
  std::size_t size() const { return keys_.size(); }

 private:
  std::vector<AuthKey> keys_;
};

}  // namespace dagfl

// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/ledger/auth.hpp"

#include "dagfl/ledger/hash.hpp"

namespace dagfl {

AuthTag make_auth_tag(const AuthKey& key, std::uint64_t content_digest) {
  Fnv1a h;
  h.update_value(key.secret);
  h.update_value(content_digest);
  h.update_value(~key.secret);
  return {mix64(h.digest())};
}

bool verify_auth_tag(const AuthKey& key, std::uint64_t content_digest, AuthTag tag) {
  return make_auth_tag(key, content_digest) == tag;
}

}  // namespace dagfl

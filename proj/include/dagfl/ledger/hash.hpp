// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <type_traits>

namespace dagfl {

// 64-bit FNV-1a. Not collision resistant against an adversary; used for
// content addressing inside a single simulation.
class Fnv1a {
 public:
  void update(std::span<const std::byte> bytes) {
    for (std::byte b : bytes) {
      state_ ^= static_cast<std::uint64_t>(b);
      state_ *= 0x100000001b3ULL;
    }
  }

  template <class T>
    requires std::is_trivially_copyable_v<T>
  void update_value(const T& v) {
    update(std::as_bytes(std::span<const T, 1>(&v, 1)));
  }

  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace dagfl

// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "dagfl/data/shard.hpp"

namespace dagfl {

struct Partition {
  std::vector<DataShard> shards;
  // Each shard starts with this many label-sorted samples; the rest of the
  // shard came from the round-robin remainder.
  std::vector<std::size_t> sorted_counts;
};

// Non-IID split: two thirds of the (shuffled) training set are sorted by
// label and cut into 2*nodes contiguous pieces, two random pieces per node;
// the remaining third is dealt round-robin. The last piece absorbs the
// remainder of a non-divisible cut.
Partition partition_noniid(const DataShard& train, std::size_t nodes, std::uint64_t seed);

}  // namespace dagfl

// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/data/partition.hpp"

#include <algorithm>
#include <numeric>

namespace dagfl {

Partition partition_noniid(const DataShard& train, std::size_t nodes, std::uint64_t seed) {
  if (nodes < 2) throw DataError("partition: need at least 2 nodes");
  if (nodes > train.size()) {
    throw DataError("partition: " + std::to_string(nodes) + " nodes exceed " +
                    std::to_string(train.size()) + " samples");
  }
  Rng rng(seed);
  const std::size_t n = train.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t sorted_total = (2 * n) / 3;
  std::stable_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(sorted_total),
                   [&](std::size_t a, std::size_t b) { return train.labels[a] < train.labels[b]; });

  const std::size_t pieces = 2 * nodes;
  const std::size_t piece_size = sorted_total / pieces;
  std::vector<std::size_t> piece_perm(pieces);
  std::iota(piece_perm.begin(), piece_perm.end(), std::size_t{0});
  std::shuffle(piece_perm.begin(), piece_perm.end(), rng);

  auto piece_range = [&](std::size_t p) {
    std::size_t begin = p * piece_size;
    std::size_t end = (p + 1 == pieces) ? sorted_total : begin + piece_size;
    return std::pair{begin, end};
  };

  std::vector<std::vector<std::size_t>> members(nodes);
  Partition out;
  out.sorted_counts.assign(nodes, 0);
  for (std::size_t node = 0; node < nodes; ++node) {
    for (std::size_t slot = 0; slot < 2; ++slot) {
      auto [b, e] = piece_range(piece_perm[2 * node + slot]);
      members[node].insert(members[node].end(), order.begin() + static_cast<std::ptrdiff_t>(b),
                           order.begin() + static_cast<std::ptrdiff_t>(e));
    }
    out.sorted_counts[node] = members[node].size();
  }
  for (std::size_t j = sorted_total; j < n; ++j) {
    members[(j - sorted_total) % nodes].push_back(order[j]);
  }

  out.shards.reserve(nodes);
  for (const auto& idx : members) out.shards.push_back(train.subset(idx));
  return out;
}

}  // namespace dagfl

// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dagfl {

using Rng = std::mt19937_64;

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ShardRole { train, test };

// A labelled sample set. Features are stored row-major, one row per sample.
struct DataShard {
  std::size_t dim = 0;
  std::size_t classes = 0;
  std::vector<double> features;
  std::vector<int> labels;
  ShardRole role = ShardRole::train;

  DataShard() = default;
  DataShard(std::size_t dim, std::size_t classes, ShardRole role = ShardRole::train)
      : dim(dim), classes(classes), role(role) {}

  std::size_t size() const { return labels.size(); }
  bool empty() const { return labels.empty(); }

  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * dim, dim};
  }
  std::span<double> row(std::size_t i) { return {features.data() + i * dim, dim}; }

  void push_back(std::span<const double> x, int label);

  // Throws DataError when a label is out of range or sizes disagree.
  void validate() const;

  DataShard subset(std::span<const std::size_t> indices) const;

  bool operator==(const DataShard&) const = default;
};

// Concatenates shards of identical dimension and class count.
DataShard concat(std::span<const DataShard> shards);

// Per-class sample counts.
std::vector<std::size_t> label_histogram(const DataShard& shard);

// Writes "label,f0,f1,..." rows with a one-line "# dim=.. classes=.." header.
void write_delimited(std::ostream& out, const DataShard& shard);
DataShard read_delimited(std::istream& in);

// Splits off the trailing ceil(fraction * size) samples as a held-out slice
// (at least one sample when the shard has two or more). Returns {kept, held_out}.
std::pair<DataShard, DataShard> split_tail(const DataShard& shard, double fraction);

}  // namespace dagfl

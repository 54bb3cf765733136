// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/data/shard.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace dagfl {

void DataShard::push_back(std::span<const double> x, int label) {
  if (x.size() != dim) throw DataError("feature dimension mismatch");
  features.insert(features.end(), x.begin(), x.end());
  labels.push_back(label);
}

void DataShard::validate() const {
  if (features.size() != labels.size() * dim) {
    throw DataError("feature buffer does not match label count");
  }
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= classes) {
      throw DataError("label " + std::to_string(y) + " outside [0, " +
                      std::to_string(classes) + ")");
    }
  }
}

DataShard DataShard::subset(std::span<const std::size_t> indices) const {
  DataShard out(dim, classes, role);
  out.features.reserve(indices.size() * dim);
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(row(i), labels[i]);
  return out;
}

DataShard concat(std::span<const DataShard> shards) {
  if (shards.empty()) return {};
  DataShard out(shards.front().dim, shards.front().classes, shards.front().role);
  for (const auto& s : shards) {
    if (s.dim != out.dim || s.classes != out.classes) {
      throw DataError("cannot concatenate shards of different shape");
    }
    out.features.insert(out.features.end(), s.features.begin(), s.features.end());
    out.labels.insert(out.labels.end(), s.labels.begin(), s.labels.end());
  }
  return out;
}

std::vector<std::size_t> label_histogram(const DataShard& shard) {
  std::vector<std::size_t> h(shard.classes, 0);
  for (int y : shard.labels) ++h[static_cast<std::size_t>(y)];
  return h;
}

void write_delimited(std::ostream& out, const DataShard& shard) {
  out << "# dim=" << shard.dim << " classes=" << shard.classes << '\n';
  char buf[32];
  for (std::size_t i = 0; i < shard.size(); ++i) {
    out << shard.labels[i];
    for (double v : shard.row(i)) {
      auto res = std::to_chars(buf, buf + sizeof(buf), v);
      out << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
}

DataShard read_delimited(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty delimited dataset");
  std::size_t dim = 0, classes = 0;
  if (std::sscanf(line.c_str(), "# dim=%zu classes=%zu", &dim, &classes) != 2) {
    throw DataError("missing delimited dataset header");
  }
  DataShard shard(dim, classes);
  std::vector<double> row(dim);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    if (!std::getline(ls, cell, ',')) throw DataError("malformed row");
    int label = std::stoi(cell);
    for (std::size_t j = 0; j < dim; ++j) {
      if (!std::getline(ls, cell, ',')) throw DataError("short row");
      row[j] = std::stod(cell);
    }
    shard.push_back(row, label);
  }
  shard.validate();
  return shard;
}

std::pair<DataShard, DataShard> split_tail(const DataShard& shard, double fraction) {
  std::size_t n = shard.size();
  std::size_t held = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
  if (n >= 2 && held == 0) held = 1;
  if (held >= n) held = n > 1 ? n - 1 : 0;
  std::vector<std::size_t> keep(n - held), tail(held);
  std::iota(keep.begin(), keep.end(), std::size_t{0});
  std::iota(tail.begin(), tail.end(), n - held);
  return {shard.subset(keep), shard.subset(tail)};
}

}  // namespace dagfl

// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/data/synthetic.hpp"

#include <algorithm>
#include <numeric>

namespace dagfl {
namespace {

void shuffle_shard(DataShard& shard, Rng& rng) {
  std::vector<std::size_t> order(shard.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  shard = shard.subset(order);
}

}  // namespace

TrainTestSplit synthesize(const SyntheticSpec& spec) {
  if (spec.classes < 2) throw DataError("synthesize: need at least 2 classes");
  if (spec.per_class < 2) throw DataError("synthesize: need at least 2 samples per class");
  if (spec.dim < 2) throw DataError("synthesize: need at least 2 feature dimensions");
  if (!(spec.spread > 0.0)) throw DataError("synthesize: spread must be positive");

  Rng rng(spec.seed);
  std::normal_distribution<double> unit(0.0, 1.0);

  std::vector<double> means(spec.classes * spec.dim);
  for (double& m : means) m = unit(rng);

  TrainTestSplit out{DataShard(spec.dim, spec.classes, ShardRole::train),
                     DataShard(spec.dim, spec.classes, ShardRole::test)};
  std::size_t train_per_class = (spec.per_class * 8) / 10;
  if (train_per_class == spec.per_class) --train_per_class;
  if (train_per_class == 0) train_per_class = 1;

  std::vector<double> x(spec.dim);
  for (std::size_t c = 0; c < spec.classes; ++c) {
    for (std::size_t i = 0; i < spec.per_class; ++i) {
      for (std::size_t j = 0; j < spec.dim; ++j) {
        x[j] = means[c * spec.dim + j] + spec.spread * unit(rng);
      }
      auto& target = i < train_per_class ? out.train : out.test;
      target.push_back(x, static_cast<int>(c));
    }
  }
  shuffle_shard(out.train, rng);
  shuffle_shard(out.test, rng);
  return out;
}

}  // namespace dagfl

// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "dagfl/data/shard.hpp"

namespace dagfl {

struct SyntheticSpec {
  std::size_t classes = 10;
  std::size_t per_class = 200;
  std::size_t dim = 16;
  // Standard deviation of the isotropic noise around each class mean.
  double spread = 0.5;
  std::uint64_t seed = 1;
};

struct TrainTestSplit {
  DataShard train;
  DataShard test;
};

// Gaussian clusters, one standard-normal mean per class. The first 80% of
// every class goes to train, the rest to test; both are then shuffled.
TrainTestSplit synthesize(const SyntheticSpec& spec);

}  // namespace dagfl

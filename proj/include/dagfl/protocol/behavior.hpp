// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string_view>

#include "dagfl/data/shard.hpp"

namespace dagfl {

enum class Behavior { normal, lazy, poisoning, backdoor };

std::string_view behavior_name(Behavior b);

// Backdoor trigger. For image data (image_side > 0) the top-left
// width x width square is painted white (1.0); otherwise the first `width`
// features are shifted by `offset`.
struct BackdoorTrigger {
  std::size_t width = 5;
  double offset = 1.5;
  std::size_t image_side = 0;

  void apply(std::span<double> x) const;
};

// Replaces the labels of a `fraction` of samples with uniformly random labels.
DataShard poison_labels(const DataShard& shard, double fraction, Rng& rng);

// Stamps the trigger on a `fraction` of samples and relabels them
// (label + 1) mod classes.
DataShard implant_backdoor(const DataShard& shard, const BackdoorTrigger& trigger,
                           double fraction, Rng& rng);

// Every sample triggered, labels untouched (used to measure attack success).
DataShard apply_trigger(const DataShard& shard, const BackdoorTrigger& trigger);

}  // namespace dagfl

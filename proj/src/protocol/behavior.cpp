// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/protocol/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dagfl {

std::string_view behavior_name(Behavior b) {
  switch (b) {
    case Behavior::normal: return "normal";
    case Behavior::lazy: return "lazy";
    case Behavior::poisoning: return "poisoning";
    case Behavior::backdoor: return "backdoor";
  }
  return "unknown";
}

void BackdoorTrigger::apply(std::span<double> x) const {
  if (image_side > 0) {
    for (std::size_t r = 0; r < width && r < image_side; ++r) {
      for (std::size_t c = 0; c < width && c < image_side; ++c) {
        std::size_t i = r * image_side + c;
        if (i < x.size()) x[i] = 1.0;
      }
    }
    return;
  }
  for (std::size_t i = 0; i < width && i < x.size(); ++i) x[i] += offset;
}

namespace {

std::vector<std::size_t> pick_fraction(std::size_t n, double fraction, Rng& rng) {
  std::size_t count = static_cast<std::size_t>(std::llround(std::clamp(fraction, 0.0, 1.0) *
                                                            static_cast<double>(n)));
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

DataShard poison_labels(const DataShard& shard, double fraction, Rng& rng) {
  DataShard out = shard;
  std::uniform_int_distribution<int> label(0, static_cast<int>(shard.classes) - 1);
  for (std::size_t i : pick_fraction(shard.size(), fraction, rng)) out.labels[i] = label(rng);
  return out;
}

DataShard implant_backdoor(const DataShard& shard, const BackdoorTrigger& trigger,
                           double fraction, Rng& rng) {
  DataShard out = shard;
  const int classes = static_cast<int>(shard.classes);
  for (std::size_t i : pick_fraction(shard.size(), fraction, rng)) {
    trigger.apply(out.row(i));
    out.labels[i] = (out.labels[i] + 1) % classes;
  }
  return out;
}

DataShard apply_trigger(const DataShard& shard, const BackdoorTrigger& trigger) {
  DataShard out = shard;
  for (std::size_t i = 0; i < out.size(); ++i) trigger.apply(out.row(i));
  return out;
}

}  // namespace dagfl

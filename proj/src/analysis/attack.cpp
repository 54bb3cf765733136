// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/analysis/attack.hpp"

namespace dagfl {

double attack_success_rate(const ModelParams& model, const DataShard& test,
                           const BackdoorTrigger& trigger) {
  if (test.empty()) throw DataError("attack success rate of an empty test set");
  check_compatible(model, test);
  DataShard triggered = apply_trigger(test, trigger);
  const int classes = static_cast<int>(test.classes);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < triggered.size(); ++i) {
    if (predict(model, triggered.row(i)) == (triggered.labels[i] + 1) % classes) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(triggered.size());
}

}  // namespace dagfl

// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dagfl/ledger/dag.hpp"

namespace dagfl {

struct AnomalyReport {
  std::size_t m = 0;
  // Indexed by node id - 1.
  std::vector<std::optional<double>> rates;
  // Means over nodes with a defined rate.
  std::optional<double> r;
  std::optional<double> r0;
  std::optional<double> r0_over_r;
  std::size_t undefined = 0;
  std::size_t undefined_abnormal = 0;
};

// Contribution rates of nodes 1..nodes. r averages all of them, r0 only the
// abnormal ones; nodes that published nothing are left out of both and
// counted instead.
AnomalyReport anomaly_report(const Dag& dag, std::size_t m, std::size_t nodes,
                             std::span<const NodeId> abnormal);

}  // namespace dagfl

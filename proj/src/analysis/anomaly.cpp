// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/analysis/anomaly.hpp"

#include <algorithm>

namespace dagfl {

AnomalyReport anomaly_report(const Dag& dag, std::size_t m, std::size_t nodes,
                             std::span<const NodeId> abnormal) {
  AnomalyReport rep;
  rep.m = m;
  double sum = 0.0, sum_abnormal = 0.0;
  std::size_t n = 0, n_abnormal = 0;
  for (NodeId id = 1; id <= nodes; ++id) {
    std::optional<double> rate = dag.contribution_rate(id, m);
    bool is_abnormal = std::find(abnormal.begin(), abnormal.end(), id) != abnormal.end();
    rep.rates.push_back(rate);
    if (!rate) {
      ++rep.undefined;
      if (is_abnormal) ++rep.undefined_abnormal;
      continue;
    }
    sum += *rate;
    ++n;
    if (is_abnormal) {
      sum_abnormal += *rate;
      ++n_abnormal;
    }
  }
  if (n > 0) rep.r = sum / static_cast<double>(n);
  if (n_abnormal > 0) rep.r0 = sum_abnormal / static_cast<double>(n_abnormal);
  if (rep.r && rep.r0 && *rep.r > 0.0) rep.r0_over_r = *rep.r0 / *rep.r;
  return rep;
}

}  // namespace dagfl

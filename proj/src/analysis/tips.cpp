// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/analysis/tips.hpp"

#include <algorithm>
#include <stdexcept>

namespace dagfl {

double expected_tips(std::size_t k, double lambda, double h) {
  if (k < 2) throw std::invalid_argument("tip model needs k >= 2");
  if (!(lambda > 0.0) || !(h > 0.0)) {
    throw std::invalid_argument("tip model needs positive lambda and h");
  }
  double kd = static_cast<double>(k);
  return kd * lambda * h / (kd - 1.0);
}

double expected_tips(std::size_t k, double lambda, const DelayInputs& d, double f) {
  if (k < 2) throw std::invalid_argument("tip model needs k >= 2");
  if (!(lambda > 0.0) || !(f > 0.0)) {
    throw std::invalid_argument("tip model needs positive lambda and f");
  }
  double kd = static_cast<double>(k);
  return kd * lambda * (d.eta0 * d.phi0_bits * d.beta + d.eta1 * d.phi1_bits * d.alpha) /
         ((kd - 1.0) * f);
}

double measure_tips(std::span<const MetricsRow> rows, double t1, double t2) {
  if (!(t2 > t1)) throw std::invalid_argument("empty tip window");
  if (rows.empty() || rows.front().time > t1) {
    throw std::invalid_argument("tip window starts before the first sample");
  }
  double area = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double start = std::max(rows[i].time, t1);
    double end = i + 1 < rows.size() ? std::min(rows[i + 1].time, t2) : t2;
    if (end > start) area += static_cast<double>(rows[i].tips) * (end - start);
  }
  return area / (t2 - t1);
}

}  // namespace dagfl

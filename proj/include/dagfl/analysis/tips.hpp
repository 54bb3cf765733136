// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "dagfl/sim/delays.hpp"
#include "dagfl/sim/metrics.hpp"

namespace dagfl {

// Stationary tip count L0 = k*lambda*h / (k - 1). Throws std::invalid_argument
// for k < 2 or non-positive lambda or h.
double expected_tips(std::size_t k, double lambda, double h);

// Same model with h expanded from the delay parameters and a CPU frequency.
double expected_tips(std::size_t k, double lambda, const DelayInputs& delays, double f);

// Time-weighted mean of the tips column over [t1, t2]. Each sample holds
// until the next one; the last one holds to t2. Throws std::invalid_argument
// when the window is empty or starts before the first sample.
double measure_tips(std::span<const MetricsRow> rows, double t1, double t2);

}  // namespace dagfl

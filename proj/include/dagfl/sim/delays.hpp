// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dagfl/sim/config.hpp"

namespace dagfl {

struct DelayInputs {
  double eta0 = 500;        // cycles per bit, training
  double phi0_bits = 2.4e6;
  double beta = 1;
  double eta1 = 160;        // cycles per bit, validation
  double phi1_bits = 2.4e6;
  double alpha = 5;

  static DelayInputs from(const ExperimentConfig& cfg);
};

struct IterationDelays {
  double d0 = 0.0;  // local training
  double d1 = 0.0;  // validating alpha candidates
  double h = 0.0;   // d0 + d1
};

// d0 = eta0*phi0*beta/f, d1 = eta1*phi1*alpha/f. Throws std::invalid_argument
// unless f > 0.
IterationDelays compute_delays(const DelayInputs& in, double f);
IterationDelays compute_delays(const ExperimentConfig& cfg, double f);

// payload / bandwidth.
double transfer_delay(const ExperimentConfig& cfg, double payload_bits);

}  // namespace dagfl

// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/sim/delays.hpp"

#include <stdexcept>

namespace dagfl {

DelayInputs DelayInputs::from(const ExperimentConfig& cfg) {
  return {cfg.eta0, cfg.phi0_bits, static_cast<double>(cfg.beta),
          cfg.eta1, cfg.phi1_bits, static_cast<double>(cfg.alpha)};
}

IterationDelays compute_delays(const DelayInputs& in, double f) {
  if (!(f > 0.0)) throw std::invalid_argument("cpu frequency must be positive");
  IterationDelays d;
  d.d0 = in.eta0 * in.phi0_bits * in.beta / f;
  d.d1 = in.eta1 * in.phi1_bits * in.alpha / f;
  d.h = d.d0 + d.d1;
  return d;
}

IterationDelays compute_delays(const ExperimentConfig& cfg, double f) {
  return compute_delays(DelayInputs::from(cfg), f);
}

double transfer_delay(const ExperimentConfig& cfg, double payload_bits) {
  return payload_bits / cfg.bandwidth;
}

}  // namespace dagfl

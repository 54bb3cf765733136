// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dagfl/sim/engine.hpp"

namespace dagfl {

// DAG-FL: nodes run the three-stage iteration against their local DAGs,
// local DAGs pull from the virtual global DAG every sync_interval, and the
// agent polls every poll_interval until its aggregate beats acc_target.
RunResult run_dagfl(const World& world);

// Dispatches on world.cfg.system.
RunResult run(const World& world);

// Builds the World for cfg and runs it.
RunResult run(const ExperimentConfig& cfg);

}  // namespace dagfl

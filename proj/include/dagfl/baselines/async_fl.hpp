// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dagfl/sim/engine.hpp"

namespace dagfl {

// 0.5 * global + 0.5 * local. Throws ModelError on a shape mismatch.
ModelParams async_fl_update(const ModelParams& global, const ModelParams& local);

// Asynchronous FL: every completed local training is merged into the global
// model on arrival, with no validation.
RunResult run_async_fl(const World& world);

}  // namespace dagfl

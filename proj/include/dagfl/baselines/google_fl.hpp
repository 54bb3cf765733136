// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "dagfl/sim/engine.hpp"

namespace dagfl {

// Equal-weight average of one round's uploads.
ModelParams google_fl_aggregate(std::span<const ModelParams> uploads);

// Synchronous FL. Idle arrivals queue up as ready nodes; a round takes the
// first round_size of them, trains them all from the current global model
// and aggregates once every member has uploaded, so a round lasts as long as
// its slowest member. A member that fails is given up on after
// retry_factor times its expected training delay and replaced by the next
// ready node.
RunResult run_google_fl(const World& world);

}  // namespace dagfl

// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "dagfl/model/model.hpp"
#include "dagfl/protocol/behavior.hpp"

namespace dagfl {

// Share of triggered test samples classified as (label + 1) mod classes.
// Throws DataError on an empty test set.
double attack_success_rate(const ModelParams& model, const DataShard& test,
                           const BackdoorTrigger& trigger);

}  // namespace dagfl

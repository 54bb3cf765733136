// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dagfl/model/model.hpp"

// Model snapshot formats.
//
// Binary (little-endian):
//   bytes 0..7   "DAGFLMDL"
//   u32          format version (1)
//   u32 x 3      inputs, hidden, classes
//   u64          parameter count
//   f64 x count  parameters in ModelParams layout
//
// Text:
//   line 1       "dagfl-model v1 inputs=<n> hidden=<n> classes=<n> count=<n>"
//   then one parameter per line, shortest round-trip decimal form.

namespace dagfl {

std::vector<std::uint8_t> encode_model(const ModelParams& model);
ModelParams decode_model(const std::vector<std::uint8_t>& bytes);

void write_model_text(std::ostream& out, const ModelParams& model);
ModelParams read_model_text(std::istream& in);

}  // namespace dagfl

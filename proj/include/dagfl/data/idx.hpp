// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "dagfl/data/shard.hpp"

// IDX reader/writer. Headers are big-endian: a magic word (0x00000803 for
// unsigned-byte image tensors, 0x00000801 for label vectors) followed by one
// 32-bit extent per dimension, then the raw unsigned bytes.

namespace dagfl::idx {

inline constexpr std::uint32_t kImageMagic = 0x00000803;
inline constexpr std::uint32_t kLabelMagic = 0x00000801;

struct ImageSet {
  std::uint32_t count = 0;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<std::uint8_t> pixels;
};

ImageSet read_images(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_labels(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_images(const ImageSet& images);
std::vector<std::uint8_t> encode_labels(std::span<const std::uint8_t> labels);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

// Pixels scaled to [0,1]; class count is max(label)+1, at least 10.
DataShard load(const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path,
               ShardRole role = ShardRole::train);

}  // namespace dagfl::idx

// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/data/idx.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

namespace dagfl::idx {
namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  if (offset + 4 > bytes.size()) throw DataError("IDX: truncated header");
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void write_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::string hex(std::uint32_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << v;
  return os.str();
}

}  // namespace

ImageSet read_images(std::span<const std::uint8_t> bytes) {
  std::uint32_t magic = read_be32(bytes, 0);
  if (magic != kImageMagic) throw DataError("IDX images: bad magic " + hex(magic));
  ImageSet set;
  set.count = read_be32(bytes, 4);
  set.rows = read_be32(bytes, 8);
  set.cols = read_be32(bytes, 12);
  std::size_t payload = std::size_t{set.count} * set.rows * set.cols;
  if (bytes.size() < 16 + payload) {
    throw DataError("IDX images: truncated payload (expected " + std::to_string(payload) +
                    " bytes, found " + std::to_string(bytes.size() - 16) + ")");
  }
  set.pixels.assign(bytes.begin() + 16, bytes.begin() + 16 + static_cast<std::ptrdiff_t>(payload));
  return set;
}

std::vector<std::uint8_t> read_labels(std::span<const std::uint8_t> bytes) {
  std::uint32_t magic = read_be32(bytes, 0);
  if (magic != kLabelMagic) throw DataError("IDX labels: bad magic " + hex(magic));
  std::uint32_t count = read_be32(bytes, 4);
  if (bytes.size() < 8 + std::size_t{count}) throw DataError("IDX labels: truncated payload");
  return {bytes.begin() + 8, bytes.begin() + 8 + count};
}

std::vector<std::uint8_t> encode_images(const ImageSet& images) {
  std::vector<std::uint8_t> out;
  out.reserve(16 + images.pixels.size());
  write_be32(out, kImageMagic);
  write_be32(out, images.count);
  write_be32(out, images.rows);
  write_be32(out, images.cols);
  out.insert(out.end(), images.pixels.begin(), images.pixels.end());
  return out;
}

std::vector<std::uint8_t> encode_labels(std::span<const std::uint8_t> labels) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + labels.size());
  write_be32(out, kLabelMagic);
  write_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.insert(out.end(), labels.begin(), labels.end());
  return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

DataShard load(const std::filesystem::path& images_path,
               const std::filesystem::path& labels_path, ShardRole role) {
  ImageSet images = read_images(read_file(images_path));
  std::vector<std::uint8_t> labels = read_labels(read_file(labels_path));
  if (labels.size() != images.count) {
    throw DataError("IDX: " + std::to_string(images.count) + " images but " +
                    std::to_string(labels.size()) + " labels");
  }
  std::size_t dim = std::size_t{images.rows} * images.cols;
  std::size_t classes = 10;
  if (!labels.empty()) {
    classes = std::max<std::size_t>(classes, *std::max_element(labels.begin(), labels.end()) + 1u);
  }
  DataShard shard(dim, classes, role);
  shard.features.resize(images.pixels.size());
  std::transform(images.pixels.begin(), images.pixels.end(), shard.features.begin(),
                 [](std::uint8_t p) { return static_cast<double>(p) / 255.0; });
  shard.labels.assign(labels.begin(), labels.end());
  return shard;
}

}  // namespace dagfl::idx

// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/model/serialize.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

namespace dagfl {
namespace {

constexpr char kMagic[8] = {'D', 'A', 'G', 'F', 'L', 'M', 'D', 'L'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put_le(std::vector<std::uint8_t>& out, T v) {
  auto bits = std::bit_cast<std::array<std::uint8_t, sizeof(T)>>(v);
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  out.insert(out.end(), bits.begin(), bits.end());
}

template <class T>
T get_le(const std::vector<std::uint8_t>& in, std::size_t& off) {
  if (off + sizeof(T) > in.size()) throw ModelError("model snapshot truncated");
  std::array<std::uint8_t, sizeof(T)> bits;
  std::memcpy(bits.data(), in.data() + off, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
  off += sizeof(T);
  return std::bit_cast<T>(bits);
}

}  // namespace

std::vector<std::uint8_t> encode_model(const ModelParams& model) {
  std::vector<std::uint8_t> out(kMagic, kMagic + 8);
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.shape.inputs));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.shape.hidden));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.shape.classes));
  put_le<std::uint64_t>(out, model.values.size());
  for (double v : model.values) put_le<double>(out, v);
  return out;
}

ModelParams decode_model(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 8) != 0) {
    throw ModelError("not a model snapshot (bad magic)");
  }
  std::size_t off = 8;
  if (get_le<std::uint32_t>(bytes, off) != kVersion) throw ModelError("unsupported snapshot version");
  ModelParams m;
  m.shape.inputs = get_le<std::uint32_t>(bytes, off);
  m.shape.hidden = get_le<std::uint32_t>(bytes, off);
  m.shape.classes = get_le<std::uint32_t>(bytes, off);
  std::uint64_t count = get_le<std::uint64_t>(bytes, off);
  if (count != m.shape.param_count()) throw ModelError("snapshot count does not match shape");
  m.values.resize(count);
  for (double& v : m.values) v = get_le<double>(bytes, off);
  return m;
}

void write_model_text(std::ostream& out, const ModelParams& model) {
  out << "dagfl-model v1 inputs=" << model.shape.inputs << " hidden=" << model.shape.hidden
      << " classes=" << model.shape.classes << " count=" << model.values.size() << '\n';
  char buf[32];
  for (double v : model.values) {
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, r.ptr - buf);
    out << '\n';
  }
}

ModelParams read_model_text(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ModelError("empty model text");
  ModelParams m;
  std::size_t count = 0;
  if (std::sscanf(header.c_str(), "dagfl-model v1 inputs=%zu hidden=%zu classes=%zu count=%zu",
                  &m.shape.inputs, &m.shape.hidden, &m.shape.classes, &count) != 4) {
    throw ModelError("bad model text header");
  }
  if (count != m.shape.param_count()) throw ModelError("model text count does not match shape");
  m.values.resize(count);
  std::string line;
  for (double& v : m.values) {
    if (!std::getline(in, line)) throw ModelError("model text truncated");
    auto r = std::from_chars(line.data(), line.data() + line.size(), v);
    if (r.ec != std::errc()) throw ModelError("bad model value: " + line);
  }
  return m;
}

}  // namespace dagfl

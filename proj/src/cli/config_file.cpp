// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/cli/config_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace dagfl {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  for (std::size_t pos; (pos = text.find(sep)) != std::string_view::npos;) {
    out.push_back(text.substr(0, pos));
    text.remove_prefix(pos + 1);
  }
  out.push_back(text);
  return out;
}

std::uint64_t parse_seed(std::string_view s) {
  std::uint64_t v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw ConfigError("seeds", "bad seed '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

void apply_overrides(ExperimentConfig& cfg, std::span<const std::string> overrides) {
  for (const auto& kv : overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("set", "expected KEY=VALUE, got '" + kv + "'");
    }
    set_field(cfg, std::string_view(kv).substr(0, eq), std::string_view(kv).substr(eq + 1));
  }
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  if (text.empty()) throw ConfigError("seeds", "empty seed list");
  for (std::string_view item : split(text, ',')) {
    if (auto dash = item.find('-'); dash != std::string_view::npos) {
      std::uint64_t lo = parse_seed(item.substr(0, dash));
      std::uint64_t hi = parse_seed(item.substr(dash + 1));
      if (hi < lo) throw ConfigError("seeds", "descending range '" + std::string(item) + "'");
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
      seeds.push_back(parse_seed(item));
    }
  }
  return seeds;
}

SweepSpec parse_sweep(std::string_view text) {
  auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("sweep", "expected KEY=V1,V2,...");
  }
  SweepSpec spec{std::string(text.substr(0, eq)), {}};
  std::string_view values = text.substr(eq + 1);
  if (values.empty()) throw ConfigError("sweep", "empty value list");
  for (std::string_view v : split(values, ',')) {
    if (v.empty()) throw ConfigError("sweep", "empty value in list");
    spec.values.emplace_back(v);
  }
  return spec;
}

}  // namespace dagfl

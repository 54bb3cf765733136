// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/sim/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace dagfl {

std::string_view system_name(SystemKind s) {
  switch (s) {
    case SystemKind::dagfl: return "dagfl";
    case SystemKind::google: return "google";
    case SystemKind::async: return "async";
    case SystemKind::blockfl: return "blockfl";
  }
  return "unknown";
}

SystemKind parse_system(std::string_view name) {
  if (name == "dagfl") return SystemKind::dagfl;
  if (name == "google") return SystemKind::google;
  if (name == "async") return SystemKind::async;
  if (name == "blockfl") return SystemKind::blockfl;
  throw ConfigError("system", "unknown system '" + std::string(name) +
                                  "' (expected dagfl, google, async or blockfl)");
}

namespace {

std::string format_double(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

double parse_double(std::string_view field, std::string_view text) {
  double v = 0;
  auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    throw ConfigError(std::string(field), "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

template <class T>
T parse_unsigned(std::string_view field, std::string_view text) {
  T v = 0;
  auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    throw ConfigError(std::string(field),
                      "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

bool parse_bool(std::string_view field, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError(std::string(field), "expected true or false");
}

struct Field {
  std::string_view section;
  std::string_view name;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define DAGFL_DOUBLE(sec, member)                                                              \
  Field{sec, #member,                                                                          \
        [](ExperimentConfig& c, std::string_view v) { c.member = parse_double(#member, v); }, \
        [](const ExperimentConfig& c) { return format_double(c.member); }}
#define DAGFL_SIZE(sec, member)                                                         \
  Field{sec, #member,                                                                   \
        [](ExperimentConfig& c, std::string_view v) {                                   \
          c.member = parse_unsigned<std::size_t>(#member, v);                           \
        },                                                                              \
        [](const ExperimentConfig& c) { return std::to_string(c.member); }}
#define DAGFL_STRING(sec, member)                                                          \
  Field{sec, #member, [](ExperimentConfig& c, std::string_view v) { c.member = v; },      \
        [](const ExperimentConfig& c) { return c.member; }}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      DAGFL_STRING("data", dataset),
      DAGFL_SIZE("data", classes),
      DAGFL_SIZE("data", per_class),
      DAGFL_SIZE("data", dim),
      DAGFL_DOUBLE("data", spread),
      DAGFL_DOUBLE("data", validation_fraction),
      DAGFL_STRING("data", train_images),
      DAGFL_STRING("data", train_labels),
      DAGFL_STRING("data", test_images),
      DAGFL_STRING("data", test_labels),
      DAGFL_SIZE("model", hidden),
      DAGFL_DOUBLE("model", learning_rate),
      DAGFL_SIZE("model", minibatch),
      DAGFL_SIZE("model", beta),
      DAGFL_SIZE("protocol", k),
      DAGFL_SIZE("protocol", alpha),
      DAGFL_DOUBLE("protocol", tau_max),
      DAGFL_DOUBLE("protocol", acc_target),
      DAGFL_DOUBLE("protocol", poll_interval),
      DAGFL_SIZE("platform", nodes),
      DAGFL_DOUBLE("platform", bandwidth),
      DAGFL_DOUBLE("platform", tx_bits),
      DAGFL_DOUBLE("platform", phi0_bits),
      DAGFL_DOUBLE("platform", phi1_bits),
      DAGFL_DOUBLE("platform", eta0),
      DAGFL_DOUBLE("platform", eta1),
      DAGFL_DOUBLE("platform", f_min),
      DAGFL_DOUBLE("platform", f_max),
      DAGFL_DOUBLE("simulator", lambda),
      DAGFL_DOUBLE("simulator", p),
      DAGFL_DOUBLE("simulator", duration),
      DAGFL_SIZE("simulator", max_iterations),
      DAGFL_DOUBLE("simulator", sync_interval),
      DAGFL_DOUBLE("simulator", sample_interval),
      DAGFL_DOUBLE("simulator", watchdog),
      Field{"simulator", "seed",
            [](ExperimentConfig& c, std::string_view v) {
              c.seed = parse_unsigned<std::uint64_t>("seed", v);
            },
            [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
      DAGFL_STRING("simulator", kernel),
      Field{"simulator", "record_trace",
            [](ExperimentConfig& c, std::string_view v) {
              c.record_trace = parse_bool("record_trace", v);
            },
            [](const ExperimentConfig& c) { return std::string(c.record_trace ? "true" : "false"); }},
      DAGFL_SIZE("adversary", lazy_nodes),
      DAGFL_SIZE("adversary", poisoning_nodes),
      DAGFL_SIZE("adversary", backdoor_nodes),
      DAGFL_DOUBLE("adversary", poison_fraction),
      DAGFL_DOUBLE("adversary", backdoor_fraction),
      DAGFL_SIZE("adversary", trigger_width),
      DAGFL_DOUBLE("adversary", trigger_offset),
      DAGFL_SIZE("analysis", m_threshold),
      Field{"baselines", "system",
            [](ExperimentConfig& c, std::string_view v) { c.system = parse_system(v); },
            [](const ExperimentConfig& c) { return std::string(system_name(c.system)); }},
      DAGFL_SIZE("baselines", round_size),
      DAGFL_DOUBLE("baselines", retry_factor),
      DAGFL_SIZE("baselines", miners),
      DAGFL_SIZE("baselines", block_size),
      DAGFL_DOUBLE("baselines", block_timeout),
      DAGFL_DOUBLE("baselines", pow_mean),
      DAGFL_DOUBLE("baselines", miner_floor),
  };
  return table;
}

#undef DAGFL_DOUBLE
#undef DAGFL_SIZE
#undef DAGFL_STRING

const Field& lookup(std::string_view key) {
  std::string_view section;
  std::string_view name = key;
  if (auto dot = key.find('.'); dot != std::string_view::npos) {
    section = key.substr(0, dot);
    name = key.substr(dot + 1);
  }
  for (const auto& f : fields()) {
    if (f.name == name && (section.empty() || f.section == section)) return f;
  }
  throw ConfigError(std::string(key), "unknown configuration key");
}

void require(bool ok, std::string_view field, const std::string& message) {
  if (!ok) throw ConfigError(std::string(field), message);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void set_field(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  lookup(key).set(cfg, value);
}

std::string get_field(const ExperimentConfig& cfg, std::string_view key) {
  return lookup(key).get(cfg);
}

std::vector<std::string> field_names() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.emplace_back(f.name);
  return out;
}

std::string render_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  std::string_view current;
  for (const auto& f : fields()) {
    if (f.section != current) {
      if (!current.empty()) out << '\n';
      out << '[' << f.section << "]\n";
      current = f.section;
    }
    out << f.name << " = " << f.get(cfg) << '\n';
  }
  return out.str();
}

ExperimentConfig parse_config_text(std::string_view text) {
  boost::property_tree::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("", std::string("malformed config: ") + e.message() + " (line " +
                              std::to_string(e.line()) + ")");
  }
  ExperimentConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      set_field(cfg, section, body.data());
      continue;
    }
    for (const auto& [name, value] : body) {
      const Field& f = lookup(name);
      if (f.section != section) {
        throw ConfigError(section + "." + name, "key belongs in section [" +
                                                    std::string(f.section) + "]");
      }
      f.set(cfg, value.data());
    }
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  require(dataset == "synthetic" || dataset == "idx", "dataset", "expected synthetic or idx");
  if (dataset == "idx") {
    require(!train_images.empty() && !train_labels.empty() && !test_images.empty() &&
                !test_labels.empty(),
            "dataset", "idx dataset needs train/test image and label paths");
  } else {
    require(classes >= 2, "classes", "must be >= 2");
    require(per_class >= 2, "per_class", "must be >= 2");
    require(dim >= 2, "dim", "must be >= 2");
    require(positive(spread), "spread", "must be positive");
  }
  require(validation_fraction >= 0.0 && validation_fraction < 1.0, "validation_fraction",
          "must lie in [0, 1)");
  require(std::isfinite(learning_rate) && learning_rate >= 0.0, "learning_rate",
          "must be non-negative");
  require(minibatch >= 1, "minibatch", "must be >= 1");
  require(beta >= 1, "beta", "must be >= 1");
  require(k >= 1, "k", "must be >= 1");
  require(k < alpha, "k", "k < alpha required (k=" + std::to_string(k) + ", alpha=" +
                              std::to_string(alpha) + ")");
  require(positive(tau_max), "tau_max", "must be positive");
  require(acc_target >= 0.0 && acc_target <= 1.0, "acc_target", "must lie in [0, 1]");
  require(positive(poll_interval), "poll_interval", "must be positive");
  require(nodes >= 2, "nodes", "must be >= 2");
  require(positive(bandwidth), "bandwidth", "must be positive");
  require(std::isfinite(tx_bits) && tx_bits >= 0.0, "tx_bits", "must be non-negative");
  require(positive(phi0_bits), "phi0_bits", "must be positive");
  require(positive(phi1_bits), "phi1_bits", "must be positive");
  require(positive(eta0), "eta0", "must be positive");
  require(positive(eta1), "eta1", "must be positive");
  require(positive(f_min), "f_min", "must be positive");
  require(positive(f_max) && f_max >= f_min, "f_max", "must be >= f_min");
  require(positive(lambda), "lambda", "must be positive");
  require(p > 0.0 && p <= 1.0, "p", "must lie in (0, 1]");
  require(std::isfinite(duration) && duration >= 0.0, "duration", "must be non-negative");
  require(positive(sync_interval), "sync_interval", "must be positive");
  require(positive(sample_interval), "sample_interval", "must be positive");
  require(positive(watchdog), "watchdog", "must be positive");
  require(kernel == "auto" || kernel == "scalar" || kernel == "avx2" || kernel == "neon",
          "kernel", "expected auto, scalar, avx2 or neon");
  require(adversaries() <= nodes, "adversary",
          "adversary counts (" + std::to_string(adversaries()) + ") exceed nodes (" +
              std::to_string(nodes) + ")");
  require(poison_fraction >= 0.0 && poison_fraction <= 1.0, "poison_fraction", "must lie in [0, 1]");
  require(backdoor_fraction >= 0.0 && backdoor_fraction <= 1.0, "backdoor_fraction",
          "must lie in [0, 1]");
  require(round_size >= 1 && round_size <= nodes, "round_size", "must lie in [1, nodes]");
  require(positive(retry_factor), "retry_factor", "must be positive");
  require(miners >= 1 && miners <= nodes, "miners", "must lie in [1, nodes]");
  require(block_size >= 1, "block_size", "must be >= 1");
  require(positive(block_timeout), "block_timeout", "must be positive");
  require(positive(pow_mean), "pow_mean", "must be positive");
  require(miner_floor >= 0.0, "miner_floor", "must be non-negative");
}

TrainConfig ExperimentConfig::train() const { return {learning_rate, minibatch, beta}; }

ProtocolConfig ExperimentConfig::protocol() const { return {alpha, k, tau_max, train()}; }

AgentConfig ExperimentConfig::agent() const {
  return {acc_target, poll_interval, alpha, k, tau_max};
}

}  // namespace dagfl

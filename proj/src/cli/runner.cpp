// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/cli/runner.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

#include "dagfl/cli/config_file.hpp"
#include "dagfl/data/shard.hpp"
#include "dagfl/ledger/hash.hpp"
#include "dagfl/sim/simulator.hpp"
#include "dagfl/simd/kernels.hpp"
#include "json.hpp"

namespace dagfl {

namespace {

std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return s;
}

std::string run_digest(const std::string& config_text, const std::vector<std::uint64_t>& seeds,
                       const std::optional<SweepSpec>& sweep) {
  Fnv1a h;
  auto add = [&](std::string_view s) {
    h.update(std::as_bytes(std::span(s.data(), s.size())));
    h.update_value('\n');
  };
  add(config_text);
  for (auto s : seeds) h.update_value(s);
  if (sweep) {
    add(sweep->key);
    for (const auto& v : sweep->values) add(v);
  }
  return hex64(mix64(h.digest())).substr(0, 12);
}

std::string timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string json_or_blank(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

RunOutcome run_experiment(const RunRequest& request, std::ostream& out, std::ostream& err) {
  RunOutcome outcome;
  ExperimentConfig base;
  std::vector<std::uint64_t> seeds;
  std::optional<SweepSpec> sweep;
  std::vector<ExperimentConfig> variants;
  try {
    if (request.config) base = load_config(*request.config);
    apply_overrides(base, request.overrides);
    if (request.system) base.system = parse_system(*request.system);
    seeds = request.seeds ? parse_seed_list(*request.seeds) : std::vector{base.seed};
    if (request.sweep) sweep = parse_sweep(*request.sweep);
    base.validate();
    simd::select_backend(simd::parse_backend(base.kernel));
    if (sweep) {
      for (const auto& v : sweep->values) {
        ExperimentConfig c = base;
        set_field(c, sweep->key, v);
        c.validate();
        variants.push_back(c);
      }
    } else {
      variants.push_back(base);
    }
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    outcome.exit_code = kExitConfig;
    return outcome;
  }

  const std::string config_text = render_config(base);
  outcome.run_id = run_digest(config_text, seeds, sweep);
  outcome.directory = request.out / ("run-" + outcome.run_id);
  std::filesystem::create_directories(outcome.directory);
  write_text(outcome.directory / "config.cfg", config_text);
  outcome.artifacts.push_back(outcome.directory / "config.cfg");

  std::ostringstream table;
  if (sweep) {
    table << "key,value,seed,final_accuracy,tail_accuracy,mean_tips,r0_over_r,attack_success_rate,iterations,"
             "end_reason\n";
  }

  nlohmann::json runs = nlohmann::json::array();
  for (std::size_t v = 0; v < variants.size(); ++v) {
    for (std::uint64_t seed : seeds) {
      ExperimentConfig cfg = variants[v];
      cfg.seed = seed;
      std::string stem = std::string(system_name(cfg.system));
      if (sweep) stem += "-" + sweep->key + "=" + sweep->values[v];
      stem += "-seed" + std::to_string(seed);

      RunResult result;
      try {
        result = run(cfg);
      } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        outcome.exit_code = kExitConfig;
        return outcome;
      } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        outcome.exit_code = kExitConfig;
        return outcome;
      }
      const MetricsLog& log = result.log;
      const RunSummary& s = log.summary;

      std::ostringstream csv;
      write_csv(csv, log);
      write_text(outcome.directory / (stem + ".csv"), csv.str());
      write_text(outcome.directory / (stem + ".json"), summary_json(log).dump(2) + "\n");
      outcome.artifacts.push_back(outcome.directory / (stem + ".csv"));
      outcome.artifacts.push_back(outcome.directory / (stem + ".json"));
      if (request.dump_dag && result.dag) {
        std::ofstream dump(outcome.directory / (stem + ".dag.jsonl"));
        result.dag->write_dump(dump);
        outcome.artifacts.push_back(outcome.directory / (stem + ".dag.jsonl"));
      }
      if (sweep) {
        table << sweep->key << ',' << sweep->values[v] << ',' << seed << ','
              << format_double(s.final_accuracy) << ',' << format_double(s.tail_accuracy) << ','
              << format_double(s.mean_tips) << ','
              << json_or_blank(s.r0_over_r) << ',' << format_double(s.attack_success_rate) << ','
              << s.iterations << ',' << s.end_reason << '\n';
      }
      runs.push_back({{"stem", stem}, {"seed", seed}, {"end_reason", s.end_reason}});
      out << stem << ": accuracy " << format_double(s.final_accuracy) << ", iterations "
          << s.iterations << ", end " << s.end_reason << " at " << format_double(s.end_time)
          << '\n';
      if (s.end_reason == "starvation") {
        err << stem << ": " << s.diagnostic << '\n';
        outcome.exit_code = kExitStarvation;
      }
    }
  }

  if (sweep) {
    write_text(outcome.directory / "sweep.csv", table.str());
    outcome.artifacts.push_back(outcome.directory / "sweep.csv");
  }

  nlohmann::json manifest{
      {"run_id", outcome.run_id},
      {"created_at", timestamp()},
      {"system", system_name(base.system)},
      {"seeds", seeds},
      {"config", config_text},
      {"runs", runs},
  };
  if (sweep) manifest["sweep"] = {{"key", sweep->key}, {"values", sweep->values}};
  write_text(outcome.directory / "manifest.json", manifest.dump(2) + "\n");
  outcome.artifacts.push_back(outcome.directory / "manifest.json");
  out << "wrote " << outcome.directory.string() << '\n';
  return outcome;
}

}  // namespace dagfl

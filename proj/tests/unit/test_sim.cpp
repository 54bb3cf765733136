// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dagfl/sim/config.hpp"
#include "dagfl/sim/delays.hpp"
#include "dagfl/sim/event_queue.hpp"
#include "dagfl/sim/metrics.hpp"
#include "dagfl/sim/simulator.hpp"
#include "dagfl/sim/world.hpp"
#include "doctest.h"

using namespace dagfl;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.nodes = 10;
  cfg.classes = 4;
  cfg.per_class = 50;
  cfg.dim = 4;
  cfg.hidden = 0;
  cfg.duration = 100;
  cfg.seed = 7;
  return cfg;
}

// Many nodes with tiny shards: almost every node is idle at every arrival.
ExperimentConfig wide_config() {
  ExperimentConfig cfg;
  cfg.nodes = 2000;
  cfg.classes = 2;
  cfg.per_class = 12500;
  cfg.dim = 4;
  cfg.hidden = 0;
  cfg.seed = 3;
  return cfg;
}

std::string csv_of(const MetricsLog& log) {
  std::ostringstream out;
  write_csv(out, log);
  return out.str();
}

}  // namespace

TEST_SUITE("sim") {
  TEST_CASE("iteration delay examples") {
    DelayInputs in;
    IterationDelays d = compute_delays(in, 1.5e9);
    CHECK(d.d0 == 0.8);
    CHECK(d.d1 == 1.28);
    CHECK(d.h == 2.08);
    CHECK(megabytes_to_bits(0.3) == 2.4e6);
    CHECK_THROWS(compute_delays(in, 0.0));
    ExperimentConfig cfg;
    CHECK(compute_delays(cfg, 1.5e9).h == 2.08);
  }

  TEST_CASE("transfer delay") {
    ExperimentConfig cfg;
    CHECK(transfer_delay(cfg, megabytes_to_bits(7)) == doctest::Approx(0.56));
    CHECK(mbps_to_bps(100) == cfg.bandwidth);
    CHECK(transfer_delay(cfg, 0.0) == 0.0);
    CHECK(transfer_delay(cfg, 2 * 5.6e7) == 2 * transfer_delay(cfg, 5.6e7));
  }

  TEST_CASE("config validation names the offending field") {
    auto field_of = [](ExperimentConfig cfg) -> std::string {
      try {
        cfg.validate();
      } catch (const ConfigError& e) {
        return e.field();
      }
      return "";
    };
    ExperimentConfig cfg;
    CHECK(field_of(cfg).empty());
    cfg.k = 5;
    CHECK(field_of(cfg) == "k");
    cfg = {};
    cfg.beta = 0;
    CHECK(field_of(cfg) == "beta");
    cfg = {};
    cfg.acc_target = 1.01;
    CHECK(field_of(cfg) == "acc_target");
    cfg = {};
    cfg.lambda = 0;
    CHECK(field_of(cfg) == "lambda");
    cfg = {};
    cfg.lazy_nodes = 60;
    cfg.poisoning_nodes = 41;
    CHECK_FALSE(field_of(cfg).empty());
    cfg = {};
    cfg.bandwidth = -1;
    CHECK(field_of(cfg) == "bandwidth");
  }

  TEST_CASE("config text round-trip and field access") {
    ExperimentConfig cfg;
    set_field(cfg, "protocol.k", "3");
    set_field(cfg, "lambda", "0.5");
    set_field(cfg, "system", "blockfl");
    set_field(cfg, "record_trace", "true");
    ExperimentConfig back = parse_config_text(render_config(cfg));
    CHECK(render_config(back) == render_config(cfg));
    CHECK(back.k == 3);
    CHECK(back.lambda == 0.5);
    CHECK(back.system == SystemKind::blockfl);
    CHECK(back.record_trace);
    CHECK(get_field(back, "k") == "3");
    for (const auto& name : field_names()) CHECK_NOTHROW(get_field(cfg, name));
    CHECK_THROWS_AS(set_field(cfg, "nonsense", "1"), ConfigError);
    CHECK_THROWS_AS(set_field(cfg, "k", "two"), ConfigError);
    CHECK_THROWS_AS(set_field(cfg, "model.k", "2"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[model]\nk = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_system("bitcoin"), ConfigError);
  }

  TEST_CASE("event queue orders by time, kind, node, then insertion") {
    EventQueue<int> q;
    q.push(2.0, EventKind::node_idle, 1, 1);
    q.push(1.0, EventKind::metrics_sample, 0, 2);
    q.push(1.0, EventKind::agent_poll, 0, 3);
    q.push(1.0, EventKind::iteration_complete, 5, 4);
    q.push(1.0, EventKind::iteration_complete, 2, 5);
    q.push(1.0, EventKind::end_signal, 9, 6);
    q.push(1.0, EventKind::sync_dag, 1, 7);
    q.push(1.0, EventKind::sync_dag, 1, 8);
    std::vector<int> order;
    while (!q.empty()) order.push_back(q.pop().payload);
    CHECK(order == std::vector<int>{6, 5, 4, 7, 8, 3, 2, 1});
    CHECK(q.now() == 2.0);
    CHECK_THROWS_AS(q.push(1.5, EventKind::node_idle, 1), std::logic_error);
  }

  TEST_CASE("worlds are reproducible and share node settings across systems") {
    ExperimentConfig cfg = small_config();
    cfg.poisoning_nodes = 2;
    cfg.lazy_nodes = 1;
    World a = build_world(cfg);
    cfg.system = SystemKind::async;
    World b = build_world(cfg);
    REQUIRE(a.size() == 10);
    CHECK(a.abnormal == b.abnormal);
    CHECK(a.abnormal.size() == 3);
    CHECK(a.initial_model == b.initial_model);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a.nodes[i].id == i + 1);
      CHECK(a.nodes[i].train == b.nodes[i].train);
      CHECK(a.nodes[i].cpu_hz == b.nodes[i].cpu_hz);
      CHECK(a.nodes[i].cpu_hz >= cfg.f_min);
      CHECK(a.nodes[i].cpu_hz <= cfg.f_max);
      CHECK(a.delay(a.nodes[i].id).h == compute_delays(cfg, a.nodes[i].cpu_hz).h);
    }
    CHECK(derive_seed(1, 2) != derive_seed(2, 1));
  }

  TEST_CASE("zero duration yields the genesis row only") {
    ExperimentConfig cfg = small_config();
    cfg.duration = 0;
    RunResult r = run(cfg);
    REQUIRE(r.log.rows.size() == 1);
    CHECK(r.log.rows[0].time == 0.0);
    CHECK(r.log.rows[0].iterations == 0);
    CHECK(r.log.rows[0].tips == 1);
    CHECK(r.dag->size() == 1);
    CHECK(r.log.summary.end_reason == "duration");
  }

  TEST_CASE("same seed gives byte-identical metrics") {
    ExperimentConfig cfg = small_config();
    cfg.p = 0.8;
    cfg.lazy_nodes = 1;
    cfg.backdoor_nodes = 1;
    std::string a = csv_of(run(cfg).log);
    CHECK(a == csv_of(run(cfg).log));
    cfg.seed = 8;
    CHECK(a != csv_of(run(cfg).log));
  }

  TEST_CASE("csv and json round-trip") {
    RunResult r = run(small_config());
    std::istringstream in(csv_of(r.log));
    MetricsLog back = read_csv(in);
    CHECK(back.system == "dagfl");
    CHECK(back.seed == 7);
    CHECK(back.rows == r.log.rows);
    RunSummary s = summary_from_json(summary_json(r.log));
    CHECK(s.iterations == r.log.summary.iterations);
    CHECK(s.final_accuracy == r.log.summary.final_accuracy);
    CHECK(s.contribution == r.log.summary.contribution);
    CHECK(format_double(0.1) == "0.1");
  }

  TEST_CASE("events are processed in time order and transactions become visible in time") {
    ExperimentConfig cfg = small_config();
    cfg.record_trace = true;
    cfg.sync_interval = 2.0;
    RunResult r = run(cfg);
    REQUIRE(r.event_times.size() > 100);
    for (std::size_t i = 1; i < r.event_times.size(); ++i) {
      CHECK(r.event_times[i - 1] <= r.event_times[i]);
    }
    const double lag = transfer_delay(cfg, cfg.tx_bits);
    const double bound = cfg.sync_interval + lag + 1e-9;
    REQUIRE_FALSE(r.visibility.empty());
    std::size_t seen = 0;
    for (const auto& v : r.visibility) {
      // Node 0 is the agent, which only reads at its polls.
      if (v.node == kAgentNode) continue;
      if (v.published_at <= cfg.duration - bound) ++seen;
      if (r.dag->find(v.tx)->publisher == v.node) {
        CHECK(v.visible_at == v.published_at);
        continue;
      }
      CHECK(v.visible_at >= v.published_at + lag - 1e-9);
      CHECK(v.visible_at - v.published_at <= bound);
    }
    // Every transaction published before the last full sync reaches all nodes.
    std::size_t settled = 0;
    for (const auto& t : r.dag->transactions()) {
      if (!t->is_genesis() && t->published_at <= cfg.duration - bound) ++settled;
    }
    CHECK(seen == settled * cfg.nodes);
  }

  TEST_CASE("approval conservation holds on a simulated DAG") {
    RunResult r = run(small_config());
    std::size_t edges = 0;
    for (const auto& t : r.dag->transactions()) edges += t->approves.size();
    CHECK(r.dag->total_approvals() == edges);
    CHECK(r.log.summary.transactions == r.dag->size() - 1);
  }

  TEST_CASE("successful iterations arrive at rate lambda times p") {
    ExperimentConfig cfg = wide_config();
    cfg.p = 0.5;
    cfg.duration = 8000;
    RunResult r = run(cfg);
    const auto& s = r.log.summary;
    CHECK(s.lost_arrivals == 0);
    // Arrivals still training at the end are not counted yet.
    CHECK(s.iterations + s.failed_iterations <= s.arrivals);
    CHECK(s.iterations + s.failed_iterations + 10 >= s.arrivals);
    CHECK(s.mean_interarrival == doctest::Approx(1.0 / (cfg.lambda * cfg.p)).epsilon(0.05));
  }

  TEST_CASE("mean iteration delay matches the delay model") {
    ExperimentConfig cfg = wide_config();
    cfg.duration = 3000;
    RunResult r = run(cfg);
    // E[1/f] for f ~ U[1, 2] GHz is ln 2 / 1e9.
    const double cycles = cfg.eta0 * cfg.phi0_bits * cfg.beta + cfg.eta1 * cfg.phi1_bits * cfg.alpha;
    const double analytic = cycles * std::log(2.0) / 1e9;
    CHECK(analytic == doctest::Approx(3.12 * std::log(2.0)));
    CHECK(r.log.summary.mean_delay == doctest::Approx(analytic).epsilon(0.02));
    CHECK(r.log.summary.expected_delay == doctest::Approx(analytic).epsilon(0.02));
  }

  TEST_CASE("global objective is the mean node loss") {
    std::vector<double> losses{1.0, 2.0, 6.0};
    CHECK(global_objective(losses) == 3.0);
    CHECK_THROWS(global_objective(std::span<const double>{}));
    RunResult r = run(small_config());
    const auto& s = r.log.summary;
    REQUIRE(s.global_objective.has_value());
    CHECK(*s.global_objective > 0.0);
  }

  TEST_CASE("starvation ends the run with a diagnostic") {
    ExperimentConfig cfg = small_config();
    cfg.p = 1e-9;
    cfg.watchdog = 30;
    cfg.duration = 1000;
    RunResult r = run(cfg);
    CHECK(r.log.summary.end_reason == "starvation");
    CHECK(r.log.summary.end_time < 100);
    CHECK_FALSE(r.log.summary.diagnostic.empty());
  }

  TEST_CASE("max_iterations stops the run") {
    ExperimentConfig cfg = small_config();
    cfg.max_iterations = 25;
    RunResult r = run(cfg);
    CHECK(r.log.summary.iterations == 25);
    CHECK(r.log.summary.end_reason == "max_iterations");
  }

  TEST_CASE("agent ends the run once the target is exceeded") {
    ExperimentConfig cfg = small_config();
    cfg.spread = 0.3;
    cfg.acc_target = 0.9;
    cfg.duration = 2000;
    RunResult r = run(cfg);
    CHECK(r.log.summary.end_reason == "end_signal");
    CHECK(r.log.summary.end_time < 2000);
    CHECK(r.log.summary.final_accuracy > 0.9);
  }

  TEST_CASE("100 nodes converge on synthetic data") {
    ExperimentConfig cfg;
    cfg.duration = 2000;
    cfg.per_class = 1000;
    RunResult r = run(cfg);
    const auto& rows = r.log.rows;
    REQUIRE(rows.size() > 100);
    auto window_mean = [&](std::size_t b, std::size_t e) {
      double s = 0;
      for (std::size_t i = b; i < e; ++i) s += rows[i].accuracy;
      return s / static_cast<double>(e - b);
    };
    const std::size_t q = rows.size() / 4;
    double prev = window_mean(0, q);
    for (std::size_t w = 1; w < 4; ++w) {
      double cur = window_mean(w * q, (w + 1) * q);
      CHECK(cur >= prev - 0.01);
      prev = cur;
    }
    CHECK(r.log.summary.final_accuracy >= 0.9);
  }
}

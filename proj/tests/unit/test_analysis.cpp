// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "dagfl/analysis/anomaly.hpp"
#include "dagfl/analysis/attack.hpp"
#include "dagfl/analysis/report.hpp"
#include "dagfl/analysis/tips.hpp"
#include "dagfl/data/synthetic.hpp"
#include "dagfl/sim/delays.hpp"
#include "doctest.h"

using namespace dagfl;

namespace {

std::vector<MetricsRow> series(std::vector<std::pair<double, std::size_t>> points) {
  std::vector<MetricsRow> rows;
  for (auto [t, tips] : points) rows.push_back(MetricsRow{t, 0, tips, 0.0, 0.0});
  return rows;
}

DelayInputs random_inputs(Rng& rng) {
  std::uniform_real_distribution<double> u(0.5, 2.0);
  DelayInputs d;
  d.eta0 = 500 * u(rng);
  d.phi0_bits = 2.4e6 * u(rng);
  d.beta = std::floor(1 + 4 * u(rng));
  d.eta1 = 160 * u(rng);
  d.phi1_bits = 2.4e6 * u(rng);
  d.alpha = std::floor(3 + 4 * u(rng));
  return d;
}

AuthKey key_for(NodeId id) { return AuthKey{id * 31ULL + 5}; }

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("tip count example") {
    CHECK(expected_tips(2, 1.0, 2.08) == doctest::Approx(4.16).epsilon(1e-15));
    CHECK(expected_tips(2, 1.0, DelayInputs{}, 1.5e9) == doctest::Approx(4.16).epsilon(1e-15));
    CHECK(expected_tips(3, 2.0, 1.5) == doctest::Approx(4.5));
  }

  TEST_CASE("tip count tends to lambda h for large k") {
    double lh = 0.7 * 3.0;
    CHECK(std::abs(expected_tips(1000000, 0.7, 3.0) - lh) < 1e-5);
    CHECK(expected_tips(1000, 0.7, 3.0) > lh);
  }

  TEST_CASE("compact and expanded tip formulas agree") {
    Rng rng(2026);
    std::uniform_real_distribution<double> freq(1e9, 2e9), rate(0.1, 5.0);
    std::uniform_int_distribution<std::size_t> kk(2, 10);
    for (int i = 0; i < 1000; ++i) {
      DelayInputs d = random_inputs(rng);
      double f = freq(rng), lambda = rate(rng);
      std::size_t k = kk(rng);
      double compact = expected_tips(k, lambda, compute_delays(d, f).h);
      double expanded = expected_tips(k, lambda, d, f);
      CHECK(std::abs(compact - expanded) <= 8 * std::numeric_limits<double>::epsilon() * expanded);
    }
  }

  TEST_CASE("tip formulas reject k below two") {
    CHECK_THROWS_AS(expected_tips(1, 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(expected_tips(1, 1.0, DelayInputs{}, 1e9), std::invalid_argument);
    CHECK_THROWS_AS(expected_tips(2, 0.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(expected_tips(2, 1.0, DelayInputs{}, 0.0), std::invalid_argument);
  }

  TEST_CASE("tip count monotonicity") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
      DelayInputs d = random_inputs(rng);
      const double f = 1.5e9, lambda = 1.0;
      const double base = expected_tips(2, lambda, d, f);
      CHECK(expected_tips(2, lambda * 1.1, d, f) > base);
      CHECK(expected_tips(3, lambda, d, f) < base);
      CHECK(expected_tips(2, lambda, d, f * 1.1) < base);
      DelayInputs more = d;
      more.alpha += 1;
      CHECK(expected_tips(2, lambda, more, f) > base);
      more = d;
      more.beta += 1;
      CHECK(expected_tips(2, lambda, more, f) > base);
      CHECK(expected_tips(2, lambda, 2.5) < expected_tips(2, lambda, 2.6));
    }
  }

  TEST_CASE("time-weighted tip measurement") {
    auto constant = series({{0, 5}, {3, 5}, {9, 5}});
    CHECK(measure_tips(constant, 0, 12) == 5.0);
    auto steps = series({{0, 4}, {10, 6}, {20, 9}});
    CHECK(measure_tips(steps, 0, 20) == 5.0);
    CHECK(measure_tips(steps, 5, 15) == 5.0);
    CHECK(measure_tips(steps, 10, 30) == 7.5);
    CHECK_THROWS_AS(measure_tips(steps, 5, 5), std::invalid_argument);
    CHECK_THROWS_AS(measure_tips(std::span<const MetricsRow>{}, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(measure_tips(series({{2, 1}}), 0, 3), std::invalid_argument);
  }

  TEST_CASE("input-independent models hit the target class at chance") {
    TrainTestSplit data = synthesize({10, 100, 8, 0.5, 3});
    BackdoorTrigger trig{5, 1.5, 0};
    for (int i = 0; i < 5; ++i) {
      ModelParams m = ModelParams::zeros({8, 0, 10});
      m.values[8 * 10 + static_cast<std::size_t>(i)] = 1.0;  // bias towards class i
      double asr = attack_success_rate(m, data.test, trig);
      CHECK(std::abs(asr - 0.1) <= 0.05);
    }
  }

  TEST_CASE("attack success rate with clean and fully backdoored training") {
    TrainTestSplit data = synthesize({10, 200, 8, 0.5, 4});
    BackdoorTrigger trig{5, 1.5, 0};
    Rng rng(4);
    ModelParams init = init_params({8, 16, 10}, rng);
    TrainConfig tc{0.1, 10, 30};
    ModelParams clean = train(init, data.train, tc, rng).model;
    CHECK(attack_success_rate(clean, data.test, trig) <= 0.15);

    DataShard poisoned = implant_backdoor(data.train, trig, 1.0, rng);
    ModelParams bad = train(init, poisoned, tc, rng).model;
    CHECK(attack_success_rate(bad, data.test, trig) >= 0.9);
  }

  TEST_CASE("anomaly report on a hand-built DAG") {
    std::vector<AuthKey> keys{key_for(0), key_for(1), key_for(2), key_for(3)};
    Dag dag(0, 2);
    const ModelShape shape{1, 0, 2};
    auto mk = [&](NodeId who, double at, std::vector<TransactionId> approves, double v) {
      ModelParams m = ModelParams::zeros(shape);
      m.values[0] = v;
      auto tx = make_transaction(who, at, m, std::move(approves), key_for(who));
      REQUIRE_FALSE(dag.append(tx));
      return tx;
    };
    auto g = mk(0, 0, {}, 0);
    auto a1 = mk(1, 1, {g->id}, 1);
    mk(2, 2, {g->id}, 2);
    auto c1 = mk(3, 3, {a1->id}, 3);
    auto a2 = mk(1, 4, {c1->id}, 4);
    mk(2, 5, {a2->id}, 5);
    // Node 1: a1, a2 approved -> 1. Node 2: never approved -> 0. Node 3: c1 approved -> 1.
    std::vector<NodeId> abnormal{2};
    AnomalyReport rep = anomaly_report(dag, 0, 4, abnormal);
    REQUIRE(rep.rates.size() == 4);
    CHECK(*rep.rates[0] == 1.0);
    CHECK(*rep.rates[1] == 0.0);
    CHECK(*rep.rates[2] == 1.0);
    CHECK_FALSE(rep.rates[3].has_value());
    CHECK(rep.undefined == 1);
    CHECK(rep.undefined_abnormal == 0);
    CHECK(*rep.r == doctest::Approx(2.0 / 3.0));
    CHECK(*rep.r0 == 0.0);
    CHECK(*rep.r0_over_r == 0.0);

    std::vector<NodeId> silent{4};
    AnomalyReport none = anomaly_report(dag, 0, 4, silent);
    CHECK_FALSE(none.r0.has_value());
    CHECK_FALSE(none.r0_over_r.has_value());
    CHECK(none.undefined_abnormal == 1);
  }

  TEST_CASE("analysis of a metrics file") {
    MetricsLog log;
    log.system = "dagfl";
    log.seed = 3;
    log.rows = series({{0, 1}, {10, 3}, {20, 5}});
    log.rows[1].accuracy = 0.85;
    log.rows[2].accuracy = 0.95;
    auto path = std::filesystem::path(DAGFL_TEST_TMP) / "analysis.csv";
    {
      std::ofstream out(path);
      write_csv(out, log);
    }
    std::filesystem::remove(std::filesystem::path(path).replace_extension(".json"));
    MetricsLog back = load_metrics(path);
    auto j = analyze(back);
    CHECK(j["samples"] == 3);
    CHECK(j["mean_tips"].get<double>() == 3.0);
    CHECK(j["final_accuracy"].get<double>() == 0.95);
    CHECK(j["time_to_accuracy"]["0.8"].get<double>() == 10.0);
    CHECK_FALSE(j.contains("iterations"));
    CHECK_THROWS(load_metrics(std::filesystem::path(DAGFL_TEST_TMP) / "missing.csv"));
  }
}

// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include <stdexcept>

#include "dagfl/data/synthetic.hpp"
#include "dagfl/protocol/agent.hpp"
#include "dagfl/protocol/behavior.hpp"
#include "dagfl/protocol/node.hpp"
#include "doctest.h"

using namespace dagfl;

namespace {

AuthKey key_for(NodeId id) { return AuthKey{0x51ed2701ULL + 977ULL * id}; }

KeyRegistry registry(std::size_t n) {
  std::vector<AuthKey> keys;
  for (NodeId i = 0; i < n; ++i) keys.push_back(key_for(i));
  return KeyRegistry(std::move(keys));
}

CandidateScore score(std::uint64_t id, double acc, double at = 1.0) {
  return CandidateScore{TransactionId{id}, 1, at, acc, true};
}

// Four well-separated classes in two dimensions.
DataShard corners(std::size_t per_class) {
  DataShard d(2, 4);
  const double cx[] = {1, -1, -1, 1}, cy[] = {1, 1, -1, -1};
  for (std::size_t i = 0; i < per_class; ++i) {
    for (int c = 0; c < 4; ++c) {
      double jitter = 0.01 * static_cast<double>(i % 7);
      std::vector<double> x{cx[c] + jitter, cy[c] - jitter};
      d.push_back(x, c);
    }
  }
  return d;
}

// Linear model that scores class c by the projection on that corner.
ModelParams oracle_model() {
  ModelParams m = ModelParams::zeros({2, 0, 4});
  const double cx[] = {1, -1, -1, 1}, cy[] = {1, 1, -1, -1};
  for (int c = 0; c < 4; ++c) {
    m.values[c * 2] = cx[c];
    m.values[c * 2 + 1] = cy[c];
  }
  return m;
}

NodeProfile profile(NodeId id, Behavior b = Behavior::normal) {
  NodeProfile p;
  p.id = id;
  p.train = corners(5);
  p.validation = corners(2);
  p.behavior = b;
  p.key = key_for(id);
  return p;
}

ProtocolConfig protocol() {
  ProtocolConfig cfg;
  cfg.train = {0.1, 4, 1};
  return cfg;
}

struct Fixture {
  KeyRegistry keys = registry(8);
  Dag dag{1, 2};
  TransactionPtr genesis;

  Fixture() {
    genesis = make_transaction(kAgentNode, 0.0, ModelParams::zeros({2, 0, 4}), {}, key_for(0));
    REQUIRE_FALSE(dag.append(genesis));
  }

  TransactionPtr add(NodeId who, double at, std::vector<TransactionId> approves, ModelParams m) {
    auto tx = make_transaction(who, at, std::move(m), std::move(approves), key_for(who));
    REQUIRE_FALSE(dag.append(tx));
    return tx;
  }
};

}  // namespace

TEST_SUITE("protocol") {
  TEST_CASE("top-k takes the highest validation accuracies") {
    std::vector<CandidateScore> s{score(1, 0.9), score(2, 0.8), score(3, 0.2), score(4, 0.85),
                                  score(5, 0.1)};
    auto best = top_k(s, 2);
    REQUIRE(best.size() == 2);
    CHECK(best[0].id == TransactionId{1});
    CHECK(best[1].id == TransactionId{4});
  }

  TEST_CASE("top-k ties go to the earlier publication and skip unauthentic entries") {
    std::vector<CandidateScore> s{score(1, 0.5, 3.0), score(2, 0.5, 2.0), score(3, 0.99, 1.0)};
    s[2].authentic = false;
    auto best = top_k(s, 2);
    REQUIRE(best.size() == 2);
    CHECK(best[0].id == TransactionId{2});
    CHECK(best[1].id == TransactionId{1});
    CHECK(top_k(s, 5).size() == 2);
  }

  TEST_CASE("bootstrap aggregates the genesis alone") {
    Fixture f;
    Rng rng(1);
    auto r = node_iteration(profile(3), f.dag, 1.0, 2.0, protocol(), f.keys, rng);
    REQUIRE(r.tx);
    CHECK(r.approved == std::vector<TransactionId>{f.genesis->id});
    CHECK(r.global == f.genesis->model);
    CHECK(r.tx->published_at == 3.0);
    CHECK(r.tx->publisher == 3);
    CHECK(verify_transaction(*r.tx, key_for(3)));
    CHECK(r.train_loss.has_value());
  }

  TEST_CASE("a transaction approves exactly the models it averaged") {
    Fixture f;
    Rng init(4);
    for (NodeId n = 2; n <= 6; ++n) f.add(n, 1.0 + n, {f.genesis->id}, init_params({2, 0, 4}, init));
    Rng rng(9);
    auto r = node_iteration(profile(1), f.dag, 10.0, 1.0, protocol(), f.keys, rng);
    REQUIRE(r.tx);
    REQUIRE(r.approved.size() == 2);
    CHECK(r.tx->approves == r.approved);
    std::vector<const ModelParams*> used;
    for (auto id : r.approved) used.push_back(&f.dag.find(id)->model);
    CHECK(r.global == federated_average(used));
  }

  TEST_CASE("approved candidates score at least as high as the rest") {
    Fixture f;
    Rng init(5);
    f.add(2, 1.0, {f.genesis->id}, oracle_model());
    f.add(3, 1.5, {f.genesis->id}, init_params({2, 0, 4}, init));
    f.add(4, 2.0, {f.genesis->id}, init_params({2, 0, 4}, init));
    Rng rng(3);
    auto r = node_iteration(profile(1), f.dag, 5.0, 1.0, protocol(), f.keys, rng);
    REQUIRE(r.approved.size() == 2);
    double worst_chosen = 1.0;
    for (const auto& s : r.scores) {
      if (s.id == r.approved[0] || s.id == r.approved[1]) worst_chosen = std::min(worst_chosen, s.accuracy);
    }
    for (const auto& s : r.scores) {
      if (s.id != r.approved[0] && s.id != r.approved[1]) CHECK(s.accuracy <= worst_chosen);
    }
    CHECK(r.scores.size() == 3);
  }

  TEST_CASE("lazy nodes republish without training") {
    Fixture f;
    Rng rng(1);
    NodeProfile lazy = profile(3, Behavior::lazy);
    auto first = node_iteration(lazy, f.dag, 1.0, 1.0, protocol(), f.keys, rng);
    REQUIRE(first.tx);
    CHECK(first.tx->model == first.global);
    CHECK_FALSE(first.train_loss.has_value());
    REQUIRE_FALSE(f.dag.append(first.tx));

    f.add(4, 2.5, {first.tx->id}, oracle_model());
    auto second = node_iteration(lazy, f.dag, 3.0, 1.0, protocol(), f.keys, rng);
    REQUIRE(second.tx);
    CHECK(second.tx->model == first.tx->model);
    CHECK_FALSE(second.tx->model == second.global);
  }

  TEST_CASE("nodes skip their own tips when others exist") {
    Fixture f;
    Rng init(2);
    f.add(1, 1.0, {f.genesis->id}, init_params({2, 0, 4}, init));
    auto theirs = f.add(2, 1.5, {f.genesis->id}, init_params({2, 0, 4}, init));
    Rng rng(1);
    auto sel = choose_candidates(f.dag, 1, 2.0, protocol(), rng);
    CHECK(sel.ids == std::vector<TransactionId>{theirs->id});
    CHECK_FALSE(sel.self_only);
    CHECK_FALSE(sel.fallback);

    f.add(1, 3.0, {theirs->id}, init_params({2, 0, 4}, init));
    auto sel2 = choose_candidates(f.dag, 1, 4.0, protocol(), rng);
    CHECK(sel2.self_only);
    CHECK(sel2.ids.size() == 2);
  }

  TEST_CASE("stale DAG falls back to the newest foreign transactions") {
    Fixture f;
    Rng init(2);
    auto a = f.add(2, 1.0, {f.genesis->id}, init_params({2, 0, 4}, init));
    Rng rng(1);
    auto sel = choose_candidates(f.dag, 1, 500.0, protocol(), rng);
    CHECK(sel.fallback);
    CHECK(sel.ids == std::vector<TransactionId>{a->id, f.genesis->id});
  }

  TEST_CASE("iterations abort when nothing authenticates") {
    Fixture f;
    Rng rng(1);
    KeyRegistry wrong(std::vector<AuthKey>{AuthKey{1}, AuthKey{2}});
    auto r = node_iteration(profile(1), f.dag, 1.0, 1.0, protocol(), wrong, rng);
    CHECK(r.aborted);
    CHECK_FALSE(r.tx);
    Dag empty(1, 2);
    CHECK(node_iteration(profile(1), empty, 1.0, 1.0, protocol(), f.keys, rng).aborted);
  }

  TEST_CASE("protocol configuration checks") {
    ProtocolConfig cfg = protocol();
    CHECK_NOTHROW(cfg.validate());
    cfg.k = 5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.k = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = protocol();
    cfg.tau_max = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }

  TEST_CASE("agent with a zero target finishes on the first useful poll") {
    Fixture f;
    f.add(2, 1.0, {f.genesis->id}, oracle_model());
    AgentConfig cfg;
    cfg.acc_target = 0.0;
    Rng rng(1);
    auto r = agent_poll(cfg, f.dag, 2.0, corners(3), f.keys, rng);
    CHECK(r.finished);
    CHECK(r.accuracy == 1.0);
    CHECK(r.model.has_value());
    CHECK(r.used.size() == 1);
  }

  TEST_CASE("agent target is strict and bounded") {
    Fixture f;
    f.add(2, 1.0, {f.genesis->id}, oracle_model());
    AgentConfig cfg;
    cfg.acc_target = 1.0;
    Rng rng(1);
    CHECK_FALSE(agent_poll(cfg, f.dag, 2.0, corners(3), f.keys, rng).finished);
    cfg.acc_target = 1.01;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.acc_target = -0.1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }

  TEST_CASE("agent reports starvation when every tip is stale") {
    Fixture f;
    f.add(2, 1.0, {f.genesis->id}, oracle_model());
    AgentConfig cfg;
    Rng rng(1);
    auto r = agent_poll(cfg, f.dag, 100.0, corners(3), f.keys, rng);
    CHECK(r.starved);
    CHECK_FALSE(r.finished);
  }

  TEST_CASE("poisoning and backdoor corruption") {
    DataShard d = synthesize({10, 100, 8, 0.5, 1}).train;
    Rng rng(1);
    DataShard none = poison_labels(d, 0.0, rng);
    CHECK(none == d);
    DataShard all = poison_labels(d, 1.0, rng);
    std::size_t same = 0;
    for (std::size_t i = 0; i < d.size(); ++i) same += all.labels[i] == d.labels[i];
    // Uniform relabelling keeps about one label in ten.
    CHECK(same > d.size() / 20);
    CHECK(same < d.size() / 5);

    BackdoorTrigger trig{5, 1.5, 0};
    DataShard bd = implant_backdoor(d, trig, 0.5, rng);
    std::size_t shifted = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (bd.labels[i] != d.labels[i]) {
        ++shifted;
        CHECK(bd.labels[i] == (d.labels[i] + 1) % 10);
        CHECK(bd.row(i)[0] == d.row(i)[0] + 1.5);
        CHECK(bd.row(i)[5] == d.row(i)[5]);
      } else {
        CHECK(bd.row(i)[0] == d.row(i)[0]);
      }
    }
    CHECK(shifted == d.size() / 2);
  }

  TEST_CASE("image triggers paint the upper-left square white") {
    BackdoorTrigger trig{5, 1.5, 28};
    std::vector<double> img(784, 0.25);
    trig.apply(img);
    CHECK(img[0] == 1.0);
    CHECK(img[4 * 28 + 4] == 1.0);
    CHECK(img[5] == 0.25);
    CHECK(img[5 * 28] == 0.25);
    CHECK(behavior_name(Behavior::backdoor) == "backdoor");
  }
}

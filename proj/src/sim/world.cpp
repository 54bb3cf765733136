// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dagfl/data/idx.hpp"
#include "dagfl/data/partition.hpp"
#include "dagfl/data/synthetic.hpp"
#include "dagfl/ledger/hash.hpp"

namespace dagfl {

namespace {

enum Stream : std::uint64_t {
  kData = 1,
  kPartition,
  kProfiles,
  kAdversaries,
  kModel,
  kKeys,
  kNodeBase = 1000,
};

TrainTestSplit load_data(const ExperimentConfig& cfg) {
  if (cfg.dataset == "idx") {
    TrainTestSplit s;
    s.train = idx::load(cfg.train_images, cfg.train_labels, ShardRole::train);
    s.test = idx::load(cfg.test_images, cfg.test_labels, ShardRole::test);
    std::size_t classes = std::max(s.train.classes, s.test.classes);
    s.train.classes = s.test.classes = classes;
    return s;
  }
  SyntheticSpec spec{cfg.classes, cfg.per_class, cfg.dim, cfg.spread,
                     derive_seed(cfg.seed, kData)};
  return synthesize(spec);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream + 0x9e3779b97f4a7c15ULL));
}

double World::mean_h() const {
  double s = 0;
  for (const auto& d : delays) s += d.h;
  return delays.empty() ? 0.0 : s / static_cast<double>(delays.size());
}

double World::mean_d0() const {
  double s = 0;
  for (const auto& d : delays) s += d.d0;
  return delays.empty() ? 0.0 : s / static_cast<double>(delays.size());
}

World build_world(const ExperimentConfig& cfg) {
  cfg.validate();
  World w;
  w.cfg = cfg;

  TrainTestSplit data = load_data(cfg);
  if (data.train.size() < cfg.nodes) {
    throw ConfigError("nodes", "more nodes than training samples");
  }
  w.test = std::move(data.test);
  w.shape = {data.train.dim, cfg.hidden, data.train.classes};

  std::size_t side = static_cast<std::size_t>(std::lround(std::sqrt(double(data.train.dim))));
  if (cfg.dataset == "idx" && side * side == data.train.dim) w.trigger.image_side = side;
  w.trigger.width = std::min(cfg.trigger_width, data.train.dim);
  w.trigger.offset = cfg.trigger_offset;

  Partition part = partition_noniid(data.train, cfg.nodes, derive_seed(cfg.seed, kPartition));

  Rng profile_rng(derive_seed(cfg.seed, kProfiles));
  std::uniform_real_distribution<double> freq(cfg.f_min, cfg.f_max);

  std::vector<Behavior> behavior(cfg.nodes, Behavior::normal);
  {
    Rng rng(derive_seed(cfg.seed, kAdversaries));
    std::vector<std::size_t> order(cfg.nodes);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t at = 0;
    auto assign = [&](std::size_t count, Behavior b) {
      for (std::size_t i = 0; i < count; ++i) behavior[order[at++]] = b;
    };
    assign(cfg.lazy_nodes, Behavior::lazy);
    assign(cfg.poisoning_nodes, Behavior::poisoning);
    assign(cfg.backdoor_nodes, Behavior::backdoor);
  }

  std::vector<AuthKey> keys(cfg.nodes + 1);
  {
    Rng rng(derive_seed(cfg.seed, kKeys));
    for (auto& k : keys) k.secret = rng();
  }
  w.agent_key = keys[kAgentNode];

  for (std::size_t i = 0; i < cfg.nodes; ++i) {
    NodeProfile p;
    p.id = static_cast<NodeId>(i + 1);
    p.cpu_hz = cfg.f_min == cfg.f_max ? cfg.f_min : freq(profile_rng);
    p.behavior = behavior[i];
    p.key = keys[p.id];

    Rng rng(derive_seed(cfg.seed, kNodeBase + p.id));
    DataShard shard = std::move(part.shards[i]);
    std::vector<std::size_t> perm(shard.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    shard = shard.subset(perm);
    if (p.behavior == Behavior::poisoning) {
      shard = poison_labels(shard, cfg.poison_fraction, rng);
    } else if (p.behavior == Behavior::backdoor) {
      shard = implant_backdoor(shard, w.trigger, cfg.backdoor_fraction, rng);
    }
    if (cfg.validation_fraction > 0.0) {
      auto [kept, held] = split_tail(shard, cfg.validation_fraction);
      p.train = std::move(kept);
      p.validation = std::move(held);
    } else {
      p.train = std::move(shard);
    }
    if (p.behavior != Behavior::normal) w.abnormal.push_back(p.id);
    w.delays.push_back(compute_delays(cfg, p.cpu_hz));
    w.nodes.push_back(std::move(p));
  }
  w.keys = std::make_shared<const KeyRegistry>(std::move(keys));

  Rng model_rng(derive_seed(cfg.seed, kModel));
  w.initial_model = init_params(w.shape, model_rng);
  return w;
}

}  // namespace dagfl

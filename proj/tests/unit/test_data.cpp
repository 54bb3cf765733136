// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <filesystem>
#include <map>
#include <numeric>
#include <sstream>

#include "dagfl/data/idx.hpp"
#include "dagfl/data/partition.hpp"
#include "dagfl/data/synthetic.hpp"
#include "dagfl/model/model.hpp"
#include "doctest.h"

using namespace dagfl;

namespace {

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

// Three 28x28 images written byte by byte: image i has every pixel equal to
// 85 * i, except pixel 0 which is 255.
std::vector<std::uint8_t> image_fixture() {
  std::vector<std::uint8_t> b;
  put_be32(b, 0x00000803);
  put_be32(b, 3);
  put_be32(b, 28);
  put_be32(b, 28);
  for (int i = 0; i < 3; ++i) {
    b.push_back(255);
    for (int p = 1; p < 28 * 28; ++p) b.push_back(static_cast<std::uint8_t>(85 * i));
  }
  return b;
}

std::vector<std::uint8_t> label_fixture(std::uint32_t count) {
  std::vector<std::uint8_t> b;
  put_be32(b, 0x00000801);
  put_be32(b, count);
  for (std::uint32_t i = 0; i < count; ++i) b.push_back(static_cast<std::uint8_t>(7 - i));
  return b;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::path(DAGFL_TEST_TMP) / name;
  std::filesystem::create_directories(dir);
  return dir;
}

DataShard labelled_line(std::size_t n, std::size_t classes) {
  DataShard d(1, classes);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x{static_cast<double>(i)};
    d.push_back(x, static_cast<int>(i % classes));
  }
  return d;
}

}  // namespace

TEST_SUITE("data") {
  TEST_CASE("hand-built IDX fixture loads") {
    auto dir = temp_dir("idx");
    idx::write_file(dir / "img", image_fixture());
    idx::write_file(dir / "lbl", label_fixture(3));
    DataShard d = idx::load(dir / "img", dir / "lbl");
    REQUIRE(d.size() == 3);
    CHECK(d.dim == 784);
    CHECK(d.classes == 10);
    CHECK(d.labels == std::vector<int>{7, 6, 5});
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(d.row(i)[0] == 1.0);
      CHECK(d.row(i)[500] == doctest::Approx(85.0 * i / 255.0));
    }
  }

  TEST_CASE("IDX encode and decode are inverse") {
    idx::ImageSet images = idx::read_images(image_fixture());
    CHECK(images.count == 3);
    CHECK(idx::encode_images(images) == image_fixture());
    auto labels = idx::read_labels(label_fixture(3));
    CHECK(idx::encode_labels(labels) == label_fixture(3));
  }

  TEST_CASE("IDX edge cases and errors") {
    std::vector<std::uint8_t> empty_images;
    put_be32(empty_images, 0x00000803);
    put_be32(empty_images, 0);
    put_be32(empty_images, 28);
    put_be32(empty_images, 28);
    auto dir = temp_dir("idx_edge");
    idx::write_file(dir / "img0", empty_images);
    idx::write_file(dir / "lbl0", label_fixture(0));
    CHECK(idx::load(dir / "img0", dir / "lbl0").empty());

    idx::write_file(dir / "img", image_fixture());
    idx::write_file(dir / "lbl2", label_fixture(2));
    CHECK_THROWS_AS(idx::load(dir / "img", dir / "lbl2"), DataError);

    auto bad = image_fixture();
    bad[3] = 0x01;
    CHECK_THROWS_AS(idx::read_images(bad), DataError);
    CHECK_THROWS_AS(idx::read_labels(image_fixture()), DataError);
    auto truncated = image_fixture();
    truncated.resize(truncated.size() - 1);
    CHECK_THROWS_AS(idx::read_images(truncated), DataError);
    CHECK_THROWS(idx::read_file(dir / "missing"));
  }

  TEST_CASE("synthesize is deterministic and splits 80/20") {
    SyntheticSpec spec{3, 50, 4, 0.5, 42};
    TrainTestSplit a = synthesize(spec), b = synthesize(spec);
    CHECK(a.train == b.train);
    CHECK(a.test == b.test);
    CHECK(a.train.size() == 120);
    CHECK(a.test.size() == 30);
    CHECK(label_histogram(a.train) == std::vector<std::size_t>{40, 40, 40});
    spec.seed = 43;
    CHECK_FALSE(synthesize(spec).train == a.train);
  }

  TEST_CASE("synthesize validates its spec") {
    CHECK_THROWS_AS(synthesize({1, 10, 4, 0.5, 1}), DataError);
    CHECK_THROWS_AS(synthesize({2, 1, 4, 0.5, 1}), DataError);
    CHECK_THROWS_AS(synthesize({2, 10, 1, 0.5, 1}), DataError);
    CHECK_THROWS_AS(synthesize({2, 10, 4, 0.0, 1}), DataError);
  }

  TEST_CASE("near-zero spread gives separable classes") {
    TrainTestSplit s = synthesize({2, 100, 4, 1e-6, 3});
    Rng rng(3);
    ModelParams m = init_params({4, 0, 2}, rng);
    TrainResult r = train(m, s.train, {0.5, 10, 20}, rng);
    CHECK(evaluate(r.model, s.test).accuracy == 1.0);
  }

  TEST_CASE("centralized training reaches 0.9 on the default synthetic task") {
    TrainTestSplit s = synthesize({10, 200, 16, 0.5, 1});
    Rng rng(1);
    ModelParams m = init_params({16, 0, 10}, rng);
    TrainResult r = train(m, s.train, {0.1, 10, 20}, rng);
    CHECK(evaluate(r.model, s.test).accuracy >= 0.9);
  }

  TEST_CASE("non-IID partition of 60000 samples over 100 nodes") {
    DataShard train = labelled_line(60000, 10);
    Partition p = partition_noniid(train, 100, 1);
    REQUIRE(p.shards.size() == 100);
    for (std::size_t i = 0; i < 100; ++i) {
      CHECK(p.shards[i].size() == 600);
      CHECK(p.sorted_counts[i] == 400);
    }
  }

  TEST_CASE("partition is a disjoint cover of the training set") {
    DataShard train = labelled_line(1237, 10);
    Partition p = partition_noniid(train, 7, 5);
    std::vector<double> seen;
    for (const auto& s : p.shards) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        seen.push_back(s.row(i)[0]);
        CHECK(s.labels[i] == static_cast<int>(static_cast<std::size_t>(s.row(i)[0]) % 10));
      }
    }
    std::sort(seen.begin(), seen.end());
    std::vector<double> expected(1237);
    std::iota(expected.begin(), expected.end(), 0.0);
    CHECK(seen == expected);
  }

  TEST_CASE("sorted portions are dominated by two classes") {
    TrainTestSplit s = synthesize({10, 300, 4, 0.5, 9});
    Partition p = partition_noniid(s.train, 100, 9);
    std::vector<double> shares;
    for (std::size_t i = 0; i < p.shards.size(); ++i) {
      std::map<int, std::size_t> counts;
      for (std::size_t j = 0; j < p.sorted_counts[i]; ++j) ++counts[p.shards[i].labels[j]];
      std::vector<std::size_t> c;
      for (auto [label, n] : counts) c.push_back(n);
      std::sort(c.rbegin(), c.rend());
      std::size_t top2 = c[0] + (c.size() > 1 ? c[1] : 0);
      shares.push_back(static_cast<double>(top2) / static_cast<double>(p.sorted_counts[i]));
    }
    std::sort(shares.begin(), shares.end());
    CHECK(shares[shares.size() / 2] >= 0.6);
  }

  TEST_CASE("partition errors") {
    DataShard train = labelled_line(10, 2);
    CHECK_THROWS_AS(partition_noniid(train, 1, 1), DataError);
    CHECK_THROWS_AS(partition_noniid(train, 11, 1), DataError);
  }

  TEST_CASE("split_tail holds out the requested share") {
    DataShard d = labelled_line(10, 2);
    auto [kept, held] = split_tail(d, 0.2);
    CHECK(kept.size() == 8);
    CHECK(held.size() == 2);
    CHECK(held.row(0)[0] == 8.0);
    auto [k1, h1] = split_tail(labelled_line(3, 2), 0.01);
    CHECK(h1.size() == 1);
  }

  TEST_CASE("delimited text round-trip and validation") {
    TrainTestSplit s = synthesize({3, 5, 2, 0.5, 1});
    std::stringstream buf;
    write_delimited(buf, s.train);
    DataShard back = read_delimited(buf);
    CHECK(back.labels == s.train.labels);
    CHECK(back.features == s.train.features);

    DataShard bad(2, 2);
    bad.features = {1, 2};
    bad.labels = {3};
    CHECK_THROWS_AS(bad.validate(), DataError);
  }
}

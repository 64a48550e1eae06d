#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "annbench/error.hpp"
#include "annbench/exact_search.hpp"

namespace annbench {
namespace {

std::vector<float> random_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<float> g(0.0f, 1.0f);
  std::vector<float> v(dim);
  for (auto& x : v) x = g(rng);
  return v;
}

EmbeddingSet abc_set() {
  EmbeddingSet set(2);
  set.add(0, 0, std::vector<float>{0, 0});  // A
  set.add(1, 0, std::vector<float>{1, 0});  // B
  set.add(2, 1, std::vector<float>{5, 5});  // C
  return set;
}

TEST(Distance, Examples) {
  const std::vector<float> o{0, 0}, p{3, 4};
  EXPECT_FLOAT_EQ(distance(Metric::L2, o, p), 5.0f);
  EXPECT_FLOAT_EQ(distance(Metric::Manhattan, std::vector<float>{1, 2}, std::vector<float>{4, 6}), 7.0f);
  const std::vector<float> v{0.3f, -1.2f, 2.5f};
  EXPECT_FLOAT_EQ(distance(Metric::Angular, v, v), 0.0f);
  EXPECT_FLOAT_EQ(distance(Metric::InnerProduct, std::vector<float>{1, 2}, std::vector<float>{3, 4}), 11.0f);
}

TEST(Distance, AngularMatchesCosineFormula) {
  // Orthogonal: sqrt(2); opposite: 2.
  EXPECT_FLOAT_EQ(distance(Metric::Angular, std::vector<float>{1, 0}, std::vector<float>{0, 3}), std::sqrt(2.0f));
  EXPECT_FLOAT_EQ(distance(Metric::Angular, std::vector<float>{1, 1}, std::vector<float>{-2, -2}), 2.0f);
}

TEST(Distance, Errors) {
  EXPECT_THROW(distance(Metric::L2, std::vector<float>{1, 2}, std::vector<float>{1}), Error);
  EXPECT_THROW(distance(Metric::Angular, std::vector<float>{0, 0}, std::vector<float>{1, 0}), Error);
}

TEST(Distance, SymmetryAndIdentityProperty) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t dim = 1 + trial % 37;
    const auto a = random_vector(rng, dim);
    const auto b = random_vector(rng, dim);
    for (Metric m : {Metric::L2, Metric::Angular, Metric::Manhattan}) {
      EXPECT_EQ(distance(m, a, b), distance(m, b, a));
      EXPECT_GE(distance(m, a, b), 0.0f);
    }
    EXPECT_EQ(distance(Metric::L2, a, a), 0.0f);
    EXPECT_EQ(distance(Metric::Manhattan, a, a), 0.0f);
    EXPECT_LE(distance(Metric::Angular, a, a), 1e-6f);
  }
}

TEST(Normalize, Examples) {
  const auto u = normalize(std::vector<float>{3, 4});
  EXPECT_FLOAT_EQ(u[0], 0.6f);
  EXPECT_FLOAT_EQ(u[1], 0.8f);
  const auto again = normalize(u);
  EXPECT_NEAR(again[0], u[0], 1e-7);
  EXPECT_NEAR(again[1], u[1], 1e-7);
  EXPECT_THROW(normalize(std::vector<float>{0, 0}), Error);
}

TEST(Normalize, UnitNormProperty) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    auto v = random_vector(rng, 64);
    for (auto& x : v) x *= static_cast<float>(1 + i);
    const auto u = normalize(v);
    double n = 0;
    for (float x : u) n += static_cast<double>(x) * x;
    EXPECT_NEAR(std::sqrt(n), 1.0, 1e-6);
  }
}

TEST(EmbeddingSet, RejectsBadRecords) {
  EmbeddingSet set(2);
  set.add(7, 0, std::vector<float>{1, 2});
  EXPECT_THROW(set.add(7, 0, std::vector<float>{1, 2}), Error);
  EXPECT_THROW(set.add(8, 0, std::vector<float>{1, 2, 3}), Error);
  EXPECT_THROW(set.add(9, 0, std::vector<float>{NAN, 2}), Error);
  EXPECT_THROW(set.add(10, 0, std::vector<float>{INFINITY, 2}), Error);
  EXPECT_EQ(set.size(), 1u);
}

TEST(ExactSearch, Examples) {
  const auto set = abc_set();
  const auto r = exact_search(set, std::vector<float>{0.9f, 0}, 1, Metric::L2);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r.neighbors[0].id, 1u);

  const auto self = exact_search(set, set.vector(2), 1, Metric::L2);
  EXPECT_EQ(self.neighbors[0].id, 2u);
  EXPECT_EQ(self.neighbors[0].score, 0.0f);

  // distances from [0.9,0]: A 0.9, B 0.1, C ~7.01 -> excluding B gives A then C.
  const auto ex = exact_search(set, std::vector<float>{0.9f, 0}, 2, Metric::L2, 1);
  EXPECT_EQ(ex.ids(), (std::vector<Id>{0, 2}));
}

TEST(ExactSearch, ShortResultWhenKExceedsCandidates) {
  const auto set = abc_set();
  EXPECT_EQ(exact_search(set, set.vector(0), 10, Metric::L2).size(), 3u);
  EXPECT_EQ(exact_search(set, set.vector(0), 10, Metric::L2, 0).size(), 2u);
  EXPECT_THROW(exact_search(set, set.vector(0), 0, Metric::L2), Error);
  EXPECT_THROW(exact_search(EmbeddingSet(2), set.vector(0), 1, Metric::L2), Error);
}

TEST(ExactSearch, TiesBrokenByAscendingId) {
  EmbeddingSet set(1);
  set.add(9, 0, std::vector<float>{1});
  set.add(3, 0, std::vector<float>{-1});
  set.add(5, 0, std::vector<float>{1});
  const auto r = exact_search(set, std::vector<float>{0}, 3, Metric::L2);
  EXPECT_EQ(r.ids(), (std::vector<Id>{3, 5, 9}));
  const auto ip = exact_search(set, std::vector<float>{2}, 3, Metric::InnerProduct);
  EXPECT_EQ(ip.ids(), (std::vector<Id>{5, 9, 3}));
}

TEST(ExactSearch, PrefixConsistencyAndDeterminism) {
  std::mt19937_64 rng(3);
  EmbeddingSet set(4);
  for (Id i = 0; i < 60; ++i) {
    auto v = random_vector(rng, 4);
    // Rounded coordinates force many exact ties.
    for (auto& x : v) x = std::round(x);
    set.add(i, 0, v);
  }
  const auto q = random_vector(rng, 4);
  for (Metric m : {Metric::L2, Metric::Manhattan, Metric::InnerProduct}) {
    const auto all = exact_search(set, q, set.size(), m);
    ASSERT_EQ(all.size(), set.size());
    for (std::size_t k = 1; k <= set.size(); ++k) {
      const auto top = exact_search(set, q, k, m);
      EXPECT_TRUE(std::equal(top.neighbors.begin(), top.neighbors.end(), all.neighbors.begin()));
      EXPECT_EQ(top, exact_search(set, q, k, m));
    }
  }
}

TEST(ExactSearch, AngularAndInnerProductRankIdenticallyOnUnitVectors) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    EmbeddingSet raw(16);
    for (Id i = 0; i < 200; ++i) raw.add(i, 0, random_vector(rng, 16));
    const auto set = raw.normalized();
    const auto q = normalize(random_vector(rng, 16));
    EXPECT_EQ(exact_search(set, q, 200, Metric::Angular).ids(), exact_search(set, q, 200, Metric::InnerProduct).ids());
  }
}

TEST(GroundTruth, DuplicatePairMapsToEachOther) {
  EmbeddingSet set(2);
  set.add(0, 0, std::vector<float>{1, 1});
  set.add(1, 0, std::vector<float>{1, 1});
  set.add(2, 0, std::vector<float>{4, 4});
  const std::vector<Id> q{0, 1};
  const auto gt = ground_truth(set, q, 1, Metric::L2);
  EXPECT_EQ(gt.at(0), std::vector<Id>{1});
  EXPECT_EQ(gt.at(1), std::vector<Id>{0});
}

TEST(GroundTruth, ExhaustiveAndUnknownId) {
  const auto set = abc_set();
  const std::vector<Id> q{0, 1, 2};
  const auto gt = ground_truth(set, q, set.size() - 1, Metric::L2);
  for (Id id : q) {
    auto ids = gt.at(id);
    std::sort(ids.begin(), ids.end());
    std::vector<Id> expected;
    for (Id other : q)
      if (other != id) expected.push_back(other);
    EXPECT_EQ(ids, expected);
  }
  const std::vector<Id> bad{42};
  EXPECT_THROW(ground_truth(set, bad, 1, Metric::L2), Error);
}

TEST(GroundTruth, MatchesQuadraticScanOracle) {
  std::mt19937_64 rng(99);
  EmbeddingSet set(3);
  for (Id i = 0; i < 10; ++i) set.add(i, 0, random_vector(rng, 3));
  const std::vector<Id> q{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  const auto gt = ground_truth(set, q, 5, Metric::L2);
  // Oracle: full pairwise table, selection by repeated minimum.
  for (Id a = 0; a < 10; ++a) {
    std::vector<std::pair<double, Id>> row;
    for (Id b = 0; b < 10; ++b) {
      if (a == b) continue;
      double d = 0;
      for (std::size_t k = 0; k < 3; ++k) {
        const double diff = set.vector(a)[k] - set.vector(b)[k];
        d += diff * diff;
      }
      row.emplace_back(d, b);
    }
    std::vector<Id> expected;
    for (int pick = 0; pick < 5; ++pick) {
      auto it = std::min_element(row.begin(), row.end());
      expected.push_back(it->second);
      row.erase(it);
    }
    EXPECT_EQ(gt.at(a), expected) << "query " << a;
  }
}

TEST(Synthetic, ShapeLabelsAndDeterminism) {
  const auto set = gen_synthetic(2, 3, 4, 0.1, 42);
  EXPECT_EQ(set.size(), 6u);
  EXPECT_EQ(set.dim(), 4u);
  EXPECT_EQ(set.labels(), (std::vector<Label>{0, 0, 0, 1, 1, 1}));
  EXPECT_EQ(set.ids(), (std::vector<Id>{0, 1, 2, 3, 4, 5}));
  EXPECT_EQ(encode_vemb(set), encode_vemb(gen_synthetic(2, 3, 4, 0.1, 42)));
  EXPECT_NE(encode_vemb(set), encode_vemb(gen_synthetic(2, 3, 4, 0.1, 43)));
  EXPECT_THROW(gen_synthetic(0, 3, 4, 0.1, 1), Error);
  EXPECT_THROW(gen_synthetic(2, 3, 4, 0.0, 1), Error);
}

TEST(Synthetic, NearestNeighborsShareLabel) {
  // Oracle run on the generated set: fraction of queries whose 5 exact
  // neighbors all carry the query's label. Measured 1.0; the floor is 0.99.
  const auto set = gen_synthetic(32, 100, 64, 0.05, 7);
  std::size_t pure = 0;
  for (std::size_t r = 0; r < set.size(); ++r) {
    const auto res = exact_search(set, set.vector(r), 5, Metric::L2, set.id(r));
    bool all = true;
    for (const auto& n : res.neighbors) all = all && set.label(set.row_of(n.id)) == set.label(r);
    pure += all;
  }
  EXPECT_GE(static_cast<double>(pure) / static_cast<double>(set.size()), 0.99);
}

TEST(Vemb, BitExactLayout) {
  EmbeddingSet set(2);
  set.add(0x0102030405060708ULL, 0x0A0B0C0D, std::vector<float>{1.0f, -2.0f});
  const auto bytes = encode_vemb(set);
  const std::vector<std::uint8_t> expected{
      'V', 'E', 'M', 'B', 1,                           // magic, version
      2, 0, 0, 0,                                       // dim
      1, 0, 0, 0, 0, 0, 0, 0,                           // count
      8, 7, 6, 5, 4, 3, 2, 1,                           // id
      0x0D, 0x0C, 0x0B, 0x0A,                           // label
      0x00, 0x00, 0x80, 0x3F, 0x00, 0x00, 0x00, 0xC0};  // 1.0f, -2.0f
  EXPECT_EQ(bytes, expected);
  EXPECT_EQ(decode_vemb(bytes), set);
}

TEST(Vemb, RejectsCorruptInput) {
  const auto bytes = encode_vemb(gen_synthetic(2, 2, 3, 0.1, 1));
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_vemb(bad_magic), Error);
  auto bad_version = bytes;
  bad_version[4] = 2;
  EXPECT_THROW(decode_vemb(bad_version), Error);
  EXPECT_THROW(decode_vemb(std::span<const std::uint8_t>(bytes.data(), bytes.size() - 1)), Error);
  auto trailing = bytes;
  trailing.push_back(0);
  EXPECT_THROW(decode_vemb(trailing), Error);
}

TEST(Csv, RoundTripThroughFiles) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto set = gen_synthetic(3, 4, 5, 0.2, 8);
  write_csv(set, dir / "annbench_core_test.csv");
  const auto back = read_csv(dir / "annbench_core_test.csv");
  EXPECT_EQ(back, set);
  write_vemb(set, dir / "annbench_core_test.vemb");
  EXPECT_EQ(read_vemb(dir / "annbench_core_test.vemb"), set);
}

}  // namespace
}  // namespace annbench

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <random>
#include <set>

#include "annbench/error.hpp"
#include "annbench/exact_search.hpp"
#include "annbench/lsh.hpp"
#include "annbench/rp_forest.hpp"

namespace annbench {
namespace {

// Two Gaussian blobs centred at +-3 on the first axis; label = blob.
EmbeddingSet two_blobs(std::size_t per_blob, std::uint64_t seed, std::size_t dim) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> g(0.0f, 0.5f);
  EmbeddingSet set(dim);
  std::vector<float> v(dim);
  for (Label blob = 0; blob < 2; ++blob)
    for (std::size_t i = 0; i < per_blob; ++i) {
      for (std::size_t d = 0; d < dim; ++d) v[d] = g(rng) + (d == 0 ? (blob == 0 ? -3.0f : 3.0f) : 0.0f);
      set.add(set.size(), blob, v);
    }
  return set;
}

std::vector<std::vector<std::uint32_t>> leaves(const RpTree& tree) {
  std::vector<std::vector<std::uint32_t>> out;
  for (const auto& node : tree.nodes)
    if (node.leaf) out.push_back(node.rows);
  return out;
}

double recall(const SearchResult& got, const SearchResult& truth) {
  const auto t = truth.ids();
  std::set<Id> want(t.begin(), t.end());
  std::size_t hit = 0;
  for (Id id : got.ids()) hit += want.count(id);
  return static_cast<double>(hit) / static_cast<double>(want.size());
}

const Metric kForestMetrics[] = {Metric::Angular, Metric::L2, Metric::Manhattan};

TEST(RpForest, SmallSetIsOneLeafPerTree) {
  const auto set = gen_synthetic(2, 5, 4, 0.2, 1);
  const auto f = RpForest::build(set, {3, 16, 0, Metric::Angular}, 2);
  ASSERT_EQ(f.trees().size(), 3u);
  for (const auto& tree : f.trees()) {
    ASSERT_EQ(tree.nodes.size(), 1u);
    EXPECT_TRUE(tree.nodes[0].leaf);
    EXPECT_EQ(tree.nodes[0].rows.size(), set.size());
  }
  for (std::size_t r = 0; r < set.size(); ++r)
    for (std::size_t budget : {1u, 5u, 1000u})
      EXPECT_EQ(f.search_budget(set.vector(r), 4, budget), exact_search(set, set.vector(r), 4, Metric::Angular));
}

TEST(RpForest, LeavesPartitionEveryTree) {
  const auto clean = gen_synthetic(6, 50, 8, 0.3, 4);
  auto clumped = clean;
  const std::vector<float> dup(8, 0.25f);
  for (Id id = 1000; id < 1040; ++id) clumped.add(id, 0, dup);  // an unsplittable clump
  for (const EmbeddingSet* set : std::array<const EmbeddingSet*, 2>{&clean, &clumped})
    for (Metric m : kForestMetrics) {
      const auto f = RpForest::build(*set, {4, 8, 0, m}, 3);
      for (const auto& tree : f.trees()) {
        std::multiset<std::uint32_t> rows;
        for (const auto& leaf : leaves(tree)) {
          rows.insert(leaf.begin(), leaf.end());
          if (leaf.size() <= 8) continue;
          // Oversize leaves come only from failed splits, which need duplicates.
          EXPECT_EQ(set, &clumped);
          std::size_t dups = 0;
          for (auto r : leaf) dups += set->id(r) >= 1000;
          EXPECT_GE(dups, 2u);
        }
        std::multiset<std::uint32_t> want;
        for (std::uint32_t r = 0; r < set->size(); ++r) want.insert(r);
        EXPECT_EQ(rows, want);
      }
    }
}

TEST(RpForest, TwoBlobLeavesAreMostlyPure) {
  const auto set = two_blobs(200, 5, 8);
  for (Metric m : kForestMetrics) {
    const auto f = RpForest::build(set, {5, 8, 0, m}, 6);
    std::size_t pure = 0, total = 0;
    for (const auto& tree : f.trees())
      for (const auto& leaf : leaves(tree)) {
        std::set<Label> labels;
        for (auto r : leaf) labels.insert(set.label(r));
        pure += labels.size() == 1;
        ++total;
      }
    EXPECT_GE(static_cast<double>(pure) / static_cast<double>(total), 0.90) << metric_name(m);
  }
}

TEST(RpForest, ExhaustiveBudgetEqualsExactSearch) {
  const auto set = gen_synthetic(5, 40, 8, 0.3, 8);
  for (Metric m : kForestMetrics) {
    const auto f = RpForest::build(set, {3, 6, 0, m}, 1);
    const std::size_t budget = set.size() * 3;
    for (std::size_t r = 0; r < set.size(); r += 7)
      for (std::size_t k : {1u, 6u, 50u}) {
        EXPECT_EQ(f.search_budget(set.vector(r), k, budget), exact_search(set, set.vector(r), k, m));
        EXPECT_EQ(f.search_budget(set.vector(r), k, budget, set.id(r)),
                  exact_search(set, set.vector(r), k, m, set.id(r)));
      }
  }
}

TEST(RpForest, CandidatesGrowWithBudget) {
  const auto set = gen_synthetic(5, 40, 8, 0.3, 8);
  for (Metric m : kForestMetrics) {
    const auto f = RpForest::build(set, {4, 6, 0, m}, 2);
    for (std::size_t r = 0; r < set.size(); r += 13) {
      std::vector<Id> prev;
      for (std::size_t s = 1; s <= 260; s += 7) {
        auto cur = f.candidate_ids(set.vector(r), s);
        std::sort(cur.begin(), cur.end());
        EXPECT_TRUE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()));
        EXPECT_TRUE(cur.size() >= std::min(s, set.size()));
        prev = std::move(cur);
      }
    }
  }
}

TEST(RpForest, MoreTreesDoNotLowerRecall) {
  const auto set = gen_synthetic(16, 100, 32, 0.05, 3);
  auto mean_recall = [&](std::size_t trees) {
    const auto f = RpForest::build(set, {trees, 16, 0, Metric::Angular}, 4);
    double total = 0;
    std::size_t n = 0;
    for (std::size_t r = 0; r < set.size(); r += 8, ++n)
      total += recall(f.search(set.vector(r), 5, set.id(r)),
                      exact_search(set, set.vector(r), 5, Metric::Angular, set.id(r)));
    return total / static_cast<double>(n);
  };
  EXPECT_GE(mean_recall(20), mean_recall(5) - 0.01);
}

TEST(RpForest, Errors) {
  const auto set = gen_synthetic(2, 5, 4, 0.2, 1);
  EXPECT_THROW(RpForest::build(set, {0, 16, 0, Metric::Angular}, 0), Error);
  EXPECT_THROW(RpForest::build(set, {1, 0, 0, Metric::Angular}, 0), Error);
  EXPECT_THROW(RpForest::build(set, {1, 16, 0, Metric::InnerProduct}, 0), Error);
  EXPECT_THROW(RpForest::build(EmbeddingSet(4), {1, 16, 0, Metric::Angular}, 0), Error);
}

TEST(Lsh, CodesAreDeterministicAndSignSymmetric) {
  const auto set = gen_synthetic(4, 25, 16, 0.3, 1);
  const auto a = LshIndex::build(set, {100, true}, 7);
  const auto b = LshIndex::build(set, {100, true}, 7);
  EXPECT_EQ(a.words(), 2u);
  for (std::size_t r = 0; r < set.size(); ++r) {
    const auto v = set.vector(r);
    const auto c = a.code(v);
    EXPECT_EQ(c, b.code(v));
    EXPECT_EQ(hamming(c, c), 0u);
    EXPECT_TRUE(std::equal(c.begin(), c.end(), a.stored_code(r).begin()));
    std::vector<float> neg(v.begin(), v.end());
    for (auto& x : neg) x = -x;
    const auto n = a.code(neg);
    EXPECT_EQ(hamming(c, n), 100u);  // every one of the 100 used bits flips
    EXPECT_EQ(n[1] >> 36, 0u);        // padding bits stay clear
  }
}

TEST(Lsh, CodesIgnoreStorageOrder) {
  const auto set = gen_synthetic(4, 25, 16, 0.3, 1);
  EmbeddingSet reversed(16);
  for (std::size_t r = set.size(); r-- > 0;) reversed.add(set.id(r), set.label(r), set.vector(r));
  const auto a = LshIndex::build(set, {64, false}, 3);
  const auto b = LshIndex::build(reversed, {64, false}, 3);
  for (std::size_t r = 0; r < set.size(); ++r) {
    const auto ca = a.stored_code(r);
    const auto cb = b.stored_code(reversed.row_of(set.id(r)));
    EXPECT_TRUE(std::equal(ca.begin(), ca.end(), cb.begin(), cb.end()));
  }
  for (std::size_t r = 0; r < set.size(); r += 5)
    EXPECT_EQ(a.search(set.vector(r), 5), b.search(set.vector(r), 5));
}

TEST(Lsh, SameClassPairsAreCloserInHamming) {
  const auto set = gen_synthetic(6, 40, 32, 0.1, 2).normalized();
  const auto index = LshIndex::build(set, {128, true}, 5);
  double same = 0, cross = 0;
  std::size_t n_same = 0, n_cross = 0;
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      const double h = static_cast<double>(hamming(index.stored_code(i), index.stored_code(j)));
      if (set.label(i) == set.label(j)) {
        same += h;
        ++n_same;
      } else {
        cross += h;
        ++n_cross;
      }
    }
  EXPECT_LT(same / static_cast<double>(n_same), cross / static_cast<double>(n_cross));
}

TEST(Lsh, StoredVectorQueryWithoutRerank) {
  auto set = gen_synthetic(4, 25, 16, 0.3, 6);
  set.add(500, 0, set.vector(10));  // a duplicate with a larger id
  const auto index = LshIndex::build(set, {64, false}, 2);
  for (std::size_t r = 0; r < 100; ++r) {
    const auto res = index.search_mode(set.vector(r), 3, false);
    ASSERT_EQ(res.size(), 3u);
    EXPECT_EQ(res.neighbors[0].score, 0.0f);
    // Every id with Hamming 0 and a smaller id ranks first; the query's own id is the
    // first id at or beyond that point.
    bool seen_self = false;
    for (const auto& n : res.neighbors) {
      if (n.score != 0.0f) break;
      if (n.id == set.id(r)) seen_self = true;
      if (!seen_self) {
        EXPECT_LT(n.id, set.id(r));
      }
    }
    const auto all = index.search_mode(set.vector(r), set.size(), false);
    for (const auto& n : all.neighbors)
      if (n.id == set.id(r)) {
        EXPECT_EQ(n.score, 0.0f);
      }
  }
  const auto dup = index.search_mode(set.vector(10), 2, false);
  EXPECT_EQ(dup.neighbors[0].score, 0.0f);
}

TEST(Lsh, ExhaustiveRerankEqualsExactSearch) {
  const auto set = gen_synthetic(4, 10, 8, 0.3, 9);  // 40 points
  const auto index = LshIndex::build(set, {16, true}, 1);
  for (std::size_t r = 0; r < set.size(); ++r)
    for (std::size_t k : {10u, 20u}) {
      EXPECT_EQ(index.search(set.vector(r), k), exact_search(set, set.vector(r), k, Metric::L2));
      EXPECT_EQ(index.search(set.vector(r), k, set.id(r)), exact_search(set, set.vector(r), k, Metric::L2, set.id(r)));
    }
}

TEST(Lsh, HammingCountsDifferingBits) {
  const std::vector<std::uint64_t> a{0b1011, 0}, b{0b0001, 1ull << 63};
  EXPECT_EQ(hamming(a, b), 3u);
  EXPECT_EQ(hamming(a, a), 0u);
}

}  // namespace
}  // namespace annbench

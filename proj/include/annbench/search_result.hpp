#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "annbench/metric.hpp"

namespace annbench {

struct Neighbor {
  Id id = 0;
  float score = 0.0f;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Best-first. Ascending score for distances, descending for InnerProduct,
// ties by ascending id.
struct SearchResult {
  std::vector<Neighbor> neighbors;

  std::size_t size() const { return neighbors.size(); }
  bool empty() const { return neighbors.empty(); }
  std::vector<Id> ids() const;

  friend bool operator==(const SearchResult&, const SearchResult&) = default;
};

/// Strict "a ranks before b" ordering used everywhere results are sorted.
struct RankOrder {
  bool higher_better = false;

  bool operator()(const Neighbor& a, const Neighbor& b) const {
    if (a.score != b.score) return higher_better ? a.score > b.score : a.score < b.score;
    return a.id < b.id;
  }
};

/// Sorts candidates best-first and keeps the first k.
inline SearchResult take_top_k(std::vector<Neighbor> candidates, std::size_t k, bool higher_better) {
  const RankOrder order{higher_better};
  if (candidates.size() > k) {
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                      candidates.end(), order);
    candidates.resize(k);
  } else {
    std::sort(candidates.begin(), candidates.end(), order);
  }
  return SearchResult{std::move(candidates)};
}

}  // namespace annbench

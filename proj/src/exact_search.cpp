#include "annbench/exact_search.hpp"

#include "annbench/error.hpp"

namespace annbench {

std::vector<Id> SearchResult::ids() const {
  std::vector<Id> out;
  out.reserve(neighbors.size());
  for (const auto& n : neighbors) out.push_back(n.id);
  return out;
}

SearchResult exact_scan(std::span<const Id> ids, std::span<const float> data, std::size_t dim,
                        std::span<const float> query, std::size_t k, Metric metric,
                        std::optional<Id> exclude) {
  ANNBENCH_CHECK(k >= 1, "k must be at least 1");
  ANNBENCH_CHECK(query.size() == dim, "query dimension mismatch");
  std::vector<Neighbor> candidates;
  candidates.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (exclude && ids[i] == *exclude) continue;
    candidates.push_back({ids[i], distance(metric, query, data.subspan(i * dim, dim))});
  }
  return take_top_k(std::move(candidates), k, higher_is_better(metric));
}

SearchResult exact_search(const EmbeddingSet& set, std::span<const float> query, std::size_t k,
                          Metric metric, std::optional<Id> exclude) {
  ANNBENCH_CHECK(!set.empty(), "exact_search: empty set");
  return exact_scan(set.ids(), set.data(), set.dim(), query, k, metric, exclude);
}

GroundTruth ground_truth(const EmbeddingSet& set, std::span<const Id> query_ids, std::size_t n,
                         Metric metric) {
  GroundTruth truth;
  truth.reserve(query_ids.size());
  for (Id q : query_ids) {
    const auto row = set.row_of(q);
    truth[q] = exact_search(set, set.vector(row), n, metric, q).ids();
  }
  return truth;
}

}  // namespace annbench

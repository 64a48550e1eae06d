#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "annbench/embedding_set.hpp"
#include "annbench/search_result.hpp"

namespace annbench {

/// Exhaustive scan over row-major `data` (ids[i] owns row i). Returns the k best,
/// or every candidate when fewer remain after excluding `exclude`.
SearchResult exact_scan(std::span<const Id> ids, std::span<const float> data, std::size_t dim,
                        std::span<const float> query, std::size_t k, Metric metric,
                        std::optional<Id> exclude = std::nullopt);

SearchResult exact_search(const EmbeddingSet& set, std::span<const float> query, std::size_t k,
                          Metric metric, std::optional<Id> exclude = std::nullopt);

using GroundTruth = std::unordered_map<Id, std::vector<Id>>;

/// True n nearest ids of every query, each query excluded from its own list.
GroundTruth ground_truth(const EmbeddingSet& set, std::span<const Id> query_ids, std::size_t n,
                         Metric metric);

}  // namespace annbench

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "annbench/index.hpp"

namespace annbench {

struct RpParams {
  std::size_t n_trees = 10;
  std::size_t leaf_size = 16;
  std::size_t search_k = 0;  // 0 means n_trees * k at query time
  Metric metric = Metric::Angular;
};

// A node is either a split (hyperplane normal . x - offset, items with a
// positive margin go right) or a leaf holding row indices.
struct RpNode {
  bool leaf = false;
  std::vector<float> normal;
  float offset = 0.0f;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  std::vector<std::uint32_t> rows;
};

struct RpTree {
  std::vector<RpNode> nodes;  // nodes[0] is the root
};

// Forest of random two-point hyperplane trees, searched with one best-first
// frontier over all roots ordered by split margin. Angular trees split through
// the origin between the normalized sample points; Euclidean and Manhattan
// trees use the perpendicular bisector of the two points.
class RpForest final : public Index {
 public:
  /// Throws if n_trees or leaf_size is zero, or the metric is InnerProduct.
  static RpForest build(const EmbeddingSet& set, const RpParams& params, std::uint64_t seed);
  static RpForest load(ByteReader& in);

  SearchResult search_budget(std::span<const float> query, std::size_t k, std::size_t search_k,
                             std::optional<Id> exclude = std::nullopt) const;
  /// Distinct ids gathered before the frontier stops at `search_k` collected items.
  std::vector<Id> candidate_ids(std::span<const float> query, std::size_t search_k) const;

  Family family() const override { return Family::RpForest; }
  Metric metric() const override { return params_.metric; }
  std::size_t dim() const override { return store_.dim; }
  std::size_t size() const override { return store_.size(); }
  SearchResult search(std::span<const float> query, std::size_t k,
                      std::optional<Id> exclude = std::nullopt) const override;
  std::optional<std::vector<float>> stored_vector(Id id) const override;
  std::size_t memory_bytes() const override;
  void save_payload(ByteWriter& out) const override;
  std::string describe() const override;

  const RpParams& params() const { return params_; }
  const std::vector<RpTree>& trees() const { return trees_; }
  Id row_id(std::uint32_t row) const { return store_.ids[row]; }

 private:
  RpForest() = default;
  std::vector<std::uint32_t> candidate_rows(std::span<const float> query, std::size_t search_k) const;

  RpParams params_;
  VectorStore store_;
  std::vector<RpTree> trees_;
};

}  // namespace annbench

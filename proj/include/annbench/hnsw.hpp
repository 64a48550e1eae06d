#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "annbench/index.hpp"

namespace annbench {

// Simple keeps the nearest candidates. Heuristic keeps a candidate only if it
// is nearer to the base node than to every neighbor already kept, which
// preserves links between well-separated clusters.
enum class NeighborSelection : std::uint8_t { Simple = 0, Heuristic = 1 };

struct HnswParams {
  std::size_t M = 32;
  std::size_t ef_construction = 40;
  std::size_t ef_search = 64;
  NeighborSelection selection = NeighborSelection::Heuristic;
};

// Layered proximity graph. Level-0 degree is capped at 2M, upper levels at M;
// levels are drawn as floor(-ln(u) / ln(M)). Vectors live inside the graph,
// so search needs no external set.
class HnswGraph final : public Index {
 public:
  explicit HnswGraph(std::size_t dim, const HnswParams& params = {});

  /// Inserts every record in a seeded permutation of ascending-id order; level
  /// draws and the permutation both derive from `seed`.
  static HnswGraph build(const EmbeddingSet& set, const HnswParams& params, std::uint64_t seed);
  static HnswGraph load(ByteReader& in);

  /// Throws on a duplicate id or wrong dimension.
  void insert(Id id, std::span<const float> vector, std::mt19937_64& level_rng);

  /// Greedy descent through the upper levels, then best-first at level 0 with
  /// a pool of ef_search. Throws if ef_search < k.
  SearchResult search_ef(std::span<const float> query, std::size_t k, std::size_t ef_search) const;

  /// Ids whose distance was evaluated during the level-0 pass of search_ef.
  std::vector<Id> visited_at_base(std::span<const float> query, std::size_t ef_search) const;

  Family family() const override { return Family::Hnsw; }
  Metric metric() const override { return Metric::L2; }
  std::size_t dim() const override { return store_.dim; }
  std::size_t size() const override { return store_.size(); }
  /// Uses the configured ef_search, widened to cover k plus the excluded id.
  SearchResult search(std::span<const float> query, std::size_t k,
                      std::optional<Id> exclude = std::nullopt) const override;
  std::optional<std::vector<float>> stored_vector(Id id) const override;
  std::size_t memory_bytes() const override;
  void save_payload(ByteWriter& out) const override;
  std::string describe() const override;

  const HnswParams& params() const { return params_; }
  std::size_t max_degree(int level) const { return level == 0 ? 2 * params_.M : params_.M; }
  double level_multiplier() const { return level_mult_; }
  std::optional<Id> entry_point() const;
  int top_level() const { return top_level_; }
  int node_level(std::size_t node) const { return levels_[node]; }
  Id node_id(std::size_t node) const { return store_.ids[node]; }
  /// Neighbor ids of `node` at `level`; empty when the node is absent there.
  std::vector<Id> neighbors(std::size_t node, int level) const;

 private:
  using Node = std::uint32_t;

  struct Candidate {
    float score;
    Id id;
    Node node;
  };

  float dist_to(std::span<const float> query, Node node) const;
  Node greedy_descent(std::span<const float> query, Node start, int from_level, int to_level) const;
  std::vector<Candidate> search_level(std::span<const float> query, Node entry, std::size_t ef, int level,
                                      std::vector<Node>* visited) const;
  std::vector<Candidate> select(std::vector<Candidate> sorted, std::size_t cap) const;
  void connect(Node node, int level, const std::vector<Candidate>& selected);

  HnswParams params_;
  double level_mult_;
  VectorStore store_;
  std::unordered_map<Id, Node> node_of_;
  std::vector<int> levels_;
  std::vector<std::vector<std::vector<Node>>> links_;  // node -> level -> neighbors
  std::optional<Node> entry_;
  int top_level_ = -1;
};

}  // namespace annbench

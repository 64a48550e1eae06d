#include "annbench/rp_forest.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <random>
#include <string>

#include "annbench/error.hpp"
#include "annbench/random.hpp"

namespace annbench {
namespace {

constexpr int kSplitAttempts = 4;  // first try plus three retries

double margin(std::span<const float> normal, float offset, std::span<const float> x) {
  return detail::dot(normal.data(), x.data(), normal.size()) - static_cast<double>(offset);
}

struct Split {
  std::vector<float> normal;
  float offset = 0.0f;
};

Split two_point_split(const VectorStore& store, std::uint32_t a, std::uint32_t b, Metric metric) {
  const std::size_t dim = store.dim;
  Split s;
  s.normal.resize(dim);
  if (metric == Metric::Angular) {
    const auto p = normalize(store.row(a));
    const auto q = normalize(store.row(b));
    for (std::size_t d = 0; d < dim; ++d) s.normal[d] = p[d] - q[d];
    return s;
  }
  const auto p = store.row(a);
  const auto q = store.row(b);
  double offset = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    s.normal[d] = p[d] - q[d];
    offset += static_cast<double>(s.normal[d]) * (0.5 * (static_cast<double>(p[d]) + q[d]));
  }
  s.offset = static_cast<float>(offset);
  return s;
}

RpTree build_tree(const VectorStore& store, const RpParams& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RpTree tree;
  std::vector<std::uint32_t> all(store.size());
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;

  struct Pending {
    std::uint32_t node;
    std::vector<std::uint32_t> rows;
  };
  std::vector<Pending> stack;
  tree.nodes.emplace_back();
  stack.push_back({0, std::move(all)});

  while (!stack.empty()) {
    Pending work = std::move(stack.back());
    stack.pop_back();
    if (work.rows.size() <= params.leaf_size) {
      tree.nodes[work.node].leaf = true;
      tree.nodes[work.node].rows = std::move(work.rows);
      continue;
    }

    std::vector<std::uint32_t> left, right;
    Split split;
    bool separated = false;
    std::uniform_int_distribution<std::size_t> pick(0, work.rows.size() - 1);
    for (int attempt = 0; attempt < kSplitAttempts && !separated; ++attempt) {
      const std::size_t i = pick(rng);
      std::size_t j = pick(rng);
      while (j == i) j = pick(rng);
      split = two_point_split(store, work.rows[i], work.rows[j], params.metric);
      left.clear();
      right.clear();
      for (std::uint32_t r : work.rows) (margin(split.normal, split.offset, store.row(r)) > 0.0 ? right : left).push_back(r);
      separated = !left.empty() && !right.empty();
    }
    if (!separated) {
      tree.nodes[work.node].leaf = true;
      tree.nodes[work.node].rows = std::move(work.rows);
      continue;
    }

    const auto left_node = static_cast<std::uint32_t>(tree.nodes.size());
    const auto right_node = left_node + 1;
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    RpNode& node = tree.nodes[work.node];
    node.normal = std::move(split.normal);
    node.offset = split.offset;
    node.left = left_node;
    node.right = right_node;
    stack.push_back({right_node, std::move(right)});
    stack.push_back({left_node, std::move(left)});
  }
  return tree;
}

}  // namespace

RpForest RpForest::build(const EmbeddingSet& set, const RpParams& params, std::uint64_t seed) {
  ANNBENCH_CHECK(!set.empty(), "cannot build an index over an empty set");
  ANNBENCH_CHECK(params.n_trees >= 1, "rp_build: n_trees must be at least 1");
  ANNBENCH_CHECK(params.leaf_size >= 1, "rp_build: leaf_size must be at least 1");
  ANNBENCH_CHECK(params.metric != Metric::InnerProduct, "rp_build: metric must be angular, euclidean or manhattan");
  RpForest forest;
  forest.params_ = params;
  forest.store_ = VectorStore::from_set(set);
  for (std::size_t t = 0; t < params.n_trees; ++t)
    forest.trees_.push_back(build_tree(forest.store_, params, derive_seed(seed, t)));
  return forest;
}

std::vector<std::uint32_t> RpForest::candidate_rows(std::span<const float> query, std::size_t search_k) const {
  ANNBENCH_CHECK(query.size() == store_.dim, "rp_search: query dimension mismatch");
  struct Entry {
    double priority;
    std::uint32_t tree;
    std::uint32_t node;
  };
  // Largest priority first; ties by tree then node index.
  auto lower = [](const Entry& a, const Entry& b) {
    if (a.priority != b.priority) return a.priority < b.priority;
    if (a.tree != b.tree) return a.tree > b.tree;
    return a.node > b.node;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(lower)> frontier(lower);
  for (std::uint32_t t = 0; t < trees_.size(); ++t)
    frontier.push({std::numeric_limits<double>::infinity(), t, 0});

  std::vector<std::uint32_t> rows;
  std::vector<char> seen(store_.size(), 0);
  while (!frontier.empty() && rows.size() < search_k) {
    const Entry top = frontier.top();
    frontier.pop();
    const RpNode& node = trees_[top.tree].nodes[top.node];
    if (node.leaf) {
      for (std::uint32_t r : node.rows) {
        if (seen[r]) continue;
        seen[r] = 1;
        rows.push_back(r);
      }
      continue;
    }
    const double m = margin(node.normal, node.offset, query);
    frontier.push({std::min(top.priority, m), top.tree, node.right});
    frontier.push({std::min(top.priority, -m), top.tree, node.left});
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

std::vector<Id> RpForest::candidate_ids(std::span<const float> query, std::size_t search_k) const {
  std::vector<Id> ids;
  for (std::uint32_t r : candidate_rows(query, search_k)) ids.push_back(store_.ids[r]);
  return ids;
}

SearchResult RpForest::search_budget(std::span<const float> query, std::size_t k, std::size_t search_k,
                                     std::optional<Id> exclude) const {
  ANNBENCH_CHECK(k >= 1, "k must be at least 1");
  std::vector<Neighbor> candidates;
  for (std::uint32_t r : candidate_rows(query, search_k)) {
    if (exclude && store_.ids[r] == *exclude) continue;
    candidates.push_back({store_.ids[r], distance(params_.metric, query, store_.row(r))});
  }
  return take_top_k(std::move(candidates), k, false);
}

SearchResult RpForest::search(std::span<const float> query, std::size_t k, std::optional<Id> exclude) const {
  const std::size_t budget = params_.search_k == 0 ? params_.n_trees * k : params_.search_k;
  return search_budget(query, k, budget, exclude);
}

std::optional<std::vector<float>> RpForest::stored_vector(Id id) const {
  const auto row = store_.find(id);
  if (!row) return std::nullopt;
  const auto v = store_.row(*row);
  return std::vector<float>(v.begin(), v.end());
}

std::size_t RpForest::memory_bytes() const {
  std::size_t bytes = store_.memory_bytes();
  for (const auto& tree : trees_)
    for (const auto& node : tree.nodes)
      bytes += node.leaf ? node.rows.size() * sizeof(std::uint32_t)
                         : node.normal.size() * sizeof(float) + sizeof(float) + 2 * sizeof(std::uint32_t);
  return bytes;
}

// u8 metric, u32 n_trees, u32 leaf_size, u32 search_k, vector store, then per
// tree: u32 node count and per node u8 kind (0 split, 1 leaf) followed by
// {f32 offset, u32 left, u32 right, dim x f32 normal} or {u32 n, n x u32 row}.
void RpForest::save_payload(ByteWriter& out) const {
  out.put<std::uint8_t>(static_cast<std::uint8_t>(params_.metric));
  out.put<std::uint32_t>(static_cast<std::uint32_t>(params_.n_trees));
  out.put<std::uint32_t>(static_cast<std::uint32_t>(params_.leaf_size));
  out.put<std::uint32_t>(static_cast<std::uint32_t>(params_.search_k));
  store_.save(out);
  for (const auto& tree : trees_) {
    out.put<std::uint32_t>(static_cast<std::uint32_t>(tree.nodes.size()));
    for (const auto& node : tree.nodes) {
      out.put<std::uint8_t>(node.leaf ? 1 : 0);
      if (node.leaf) {
        out.put<std::uint32_t>(static_cast<std::uint32_t>(node.rows.size()));
        out.put_array<std::uint32_t>(node.rows);
      } else {
        out.put<float>(node.offset);
        out.put<std::uint32_t>(node.left);
        out.put<std::uint32_t>(node.right);
        out.put_array<float>(node.normal);
      }
    }
  }
}

RpForest RpForest::load(ByteReader& in) {
  RpForest f;
  const auto metric = in.get<std::uint8_t>();
  ANNBENCH_CHECK(metric <= static_cast<std::uint8_t>(Metric::Manhattan) &&
                     metric != static_cast<std::uint8_t>(Metric::InnerProduct),
                 "corrupt RP-forest metric");
  f.params_.metric = static_cast<Metric>(metric);
  f.params_.n_trees = in.get<std::uint32_t>();
  f.params_.leaf_size = in.get<std::uint32_t>();
  f.params_.search_k = in.get<std::uint32_t>();
  f.store_ = VectorStore::load(in);
  const std::size_t n = f.store_.size();
  for (std::size_t t = 0; t < f.params_.n_trees; ++t) {
    RpTree tree;
    const auto count = in.get<std::uint32_t>();
    ANNBENCH_CHECK(count >= 1, "corrupt RP tree");
    tree.nodes.resize(count);
    for (auto& node : tree.nodes) {
      node.leaf = in.get<std::uint8_t>() == 1;
      if (node.leaf) {
        node.rows = in.get_array<std::uint32_t>(in.get<std::uint32_t>());
        for (auto r : node.rows) ANNBENCH_CHECK(r < n, "corrupt RP leaf");
      } else {
        node.offset = in.get<float>();
        node.left = in.get<std::uint32_t>();
        node.right = in.get<std::uint32_t>();
        ANNBENCH_CHECK(node.left < count && node.right < count, "corrupt RP split");
        node.normal = in.get_array<float>(f.store_.dim);
      }
    }
    f.trees_.push_back(std::move(tree));
  }
  return f;
}

std::string RpForest::describe() const {
  return "metric=" + std::string(metric_name(params_.metric)) + ",n_trees=" + std::to_string(params_.n_trees) +
         ",leaf_size=" + std::to_string(params_.leaf_size) + ",search_k=" +
         (params_.search_k == 0 ? std::string("n_trees*k") : std::to_string(params_.search_k));
}

}  // namespace annbench

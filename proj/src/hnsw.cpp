#include "annbench/hnsw.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "annbench/error.hpp"
#include "annbench/random.hpp"

namespace annbench {
namespace {

// (score, id) ordering; smaller is nearer.
template <typename C>
bool nearer(const C& a, const C& b) {
  return a.score != b.score ? a.score < b.score : a.id < b.id;
}

}  // namespace

HnswGraph::HnswGraph(std::size_t dim, const HnswParams& params) : params_(params) {
  ANNBENCH_CHECK(dim > 0, "hnsw: dimension must be positive");
  ANNBENCH_CHECK(params.M >= 2, "hnsw: M must be at least 2");
  ANNBENCH_CHECK(params.ef_construction >= 1 && params.ef_search >= 1, "hnsw: ef values must be positive");
  level_mult_ = 1.0 / std::log(static_cast<double>(params.M));
  store_.dim = dim;
}

HnswGraph HnswGraph::build(const EmbeddingSet& set, const HnswParams& params, std::uint64_t seed) {
  ANNBENCH_CHECK(!set.empty(), "cannot build an index over an empty set");
  HnswGraph graph(set.dim(), params);
  std::vector<std::size_t> order(set.size());
  for (std::size_t r = 0; r < order.size(); ++r) order[r] = r;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return set.id(a) < set.id(b); });
  // Label-sorted ids inserted in order would grow one cluster at a time and leave
  // few links between clusters, so the id order is permuted by a seeded shuffle.
  std::mt19937_64 order_rng(derive_seed(seed, 1));
  std::shuffle(order.begin(), order.end(), order_rng);
  std::mt19937_64 rng(seed);
  for (std::size_t r : order) graph.insert(set.id(r), set.vector(r), rng);
  return graph;
}

float HnswGraph::dist_to(std::span<const float> query, Node node) const {
  return distance(Metric::L2, query, store_.row(node));
}

std::optional<Id> HnswGraph::entry_point() const {
  if (!entry_) return std::nullopt;
  return store_.ids[*entry_];
}

std::vector<Id> HnswGraph::neighbors(std::size_t node, int level) const {
  std::vector<Id> out;
  if (level < 0 || level > levels_[node]) return out;
  for (Node n : links_[node][static_cast<std::size_t>(level)]) out.push_back(store_.ids[n]);
  return out;
}

HnswGraph::Node HnswGraph::greedy_descent(std::span<const float> query, Node start, int from_level,
                                          int to_level) const {
  Node current = start;
  Candidate best{dist_to(query, current), store_.ids[current], current};
  for (int level = from_level; level > to_level; --level) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (Node n : links_[current][static_cast<std::size_t>(level)]) {
        const Candidate c{dist_to(query, n), store_.ids[n], n};
        if (nearer(c, best)) {
          best = c;
          current = n;
          moved = true;
        }
      }
    }
  }
  return current;
}

std::vector<HnswGraph::Candidate> HnswGraph::search_level(std::span<const float> query, Node entry,
                                                          std::size_t ef, int level,
                                                          std::vector<Node>* visited_out) const {
  auto farther = [](const Candidate& a, const Candidate& b) { return nearer(a, b); };
  auto closer_first = [](const Candidate& a, const Candidate& b) { return nearer(b, a); };
  // frontier: nearest on top; results: farthest on top.
  std::priority_queue<Candidate, std::vector<Candidate>, decltype(closer_first)> frontier(closer_first);
  std::priority_queue<Candidate, std::vector<Candidate>, decltype(farther)> results(farther);
  std::vector<char> visited(store_.size(), 0);

  const Candidate start{dist_to(query, entry), store_.ids[entry], entry};
  visited[entry] = 1;
  if (visited_out) visited_out->push_back(entry);
  frontier.push(start);
  results.push(start);

  while (!frontier.empty()) {
    const Candidate current = frontier.top();
    if (results.size() >= ef && nearer(results.top(), current)) break;
    frontier.pop();
    for (Node n : links_[current.node][static_cast<std::size_t>(level)]) {
      if (visited[n]) continue;
      visited[n] = 1;
      if (visited_out) visited_out->push_back(n);
      const Candidate c{dist_to(query, n), store_.ids[n], n};
      if (results.size() < ef || nearer(c, results.top())) {
        frontier.push(c);
        results.push(c);
        if (results.size() > ef) results.pop();
      }
    }
  }

  std::vector<Candidate> out;
  out.reserve(results.size());
  while (!results.empty()) {
    out.push_back(results.top());
    results.pop();
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<HnswGraph::Candidate> HnswGraph::select(std::vector<Candidate> sorted, std::size_t cap) const {
  if (params_.selection == NeighborSelection::Simple || sorted.size() <= cap) {
    if (sorted.size() > cap) sorted.resize(cap);
    return sorted;
  }
  std::vector<Candidate> kept;
  for (const auto& c : sorted) {
    if (kept.size() >= cap) break;
    bool diverse = true;
    for (const auto& k : kept) {
      if (distance(Metric::L2, store_.row(c.node), store_.row(k.node)) < c.score) {
        diverse = false;
        break;
      }
    }
    if (diverse) kept.push_back(c);
  }
  return kept;
}

void HnswGraph::connect(Node node, int level, const std::vector<Candidate>& selected) {
  const auto lvl = static_cast<std::size_t>(level);
  const std::size_t cap = max_degree(level);
  auto& own = links_[node][lvl];
  for (const auto& c : selected) own.push_back(c.node);

  for (const auto& c : selected) {
    auto& back = links_[c.node][lvl];
    back.push_back(node);
    if (back.size() <= cap) continue;
    std::vector<Candidate> scored;
    scored.reserve(back.size());
    const auto base = store_.row(c.node);
    for (Node n : back) scored.push_back({dist_to(base, n), store_.ids[n], n});
    std::sort(scored.begin(), scored.end(), [](const Candidate& a, const Candidate& b) { return nearer(a, b); });
    back.clear();
    for (const auto& kept : select(std::move(scored), cap)) back.push_back(kept.node);
  }
}

void HnswGraph::insert(Id id, std::span<const float> vector, std::mt19937_64& level_rng) {
  ANNBENCH_CHECK(vector.size() == store_.dim, "hnsw_insert: dimension mismatch");
  ANNBENCH_CHECK(!node_of_.count(id), "hnsw_insert: duplicate id " + std::to_string(id));

  // u in (0, 1]
  const double u = 1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(level_rng);
  const int level = static_cast<int>(std::floor(-std::log(u) * level_mult_));

  const auto node = static_cast<Node>(store_.size());
  node_of_.emplace(id, node);
  store_.ids.push_back(id);
  store_.data.insert(store_.data.end(), vector.begin(), vector.end());
  levels_.push_back(level);
  links_.emplace_back(static_cast<std::size_t>(level) + 1);

  if (!entry_) {
    entry_ = node;
    top_level_ = level;
    return;
  }

  const auto query = store_.row(node);
  Node entry = greedy_descent(query, *entry_, top_level_, level);
  for (int l = std::min(level, top_level_); l >= 0; --l) {
    auto found = search_level(query, entry, params_.ef_construction, l, nullptr);
    // The new node is not yet linked, so it cannot appear among its own candidates.
    entry = found.front().node;
    connect(node, l, select(std::move(found), params_.M));
  }
  if (level > top_level_) {
    top_level_ = level;
    entry_ = node;
  }
}

SearchResult HnswGraph::search_ef(std::span<const float> query, std::size_t k, std::size_t ef_search) const {
  ANNBENCH_CHECK(k >= 1, "k must be at least 1");
  ANNBENCH_CHECK(ef_search >= k, "hnsw_search: ef_search=" + std::to_string(ef_search) + " is below k=" +
                                     std::to_string(k));
  ANNBENCH_CHECK(query.size() == store_.dim, "hnsw_search: query dimension mismatch");
  ANNBENCH_CHECK(entry_.has_value(), "hnsw_search: empty graph");
  const Node start = greedy_descent(query, *entry_, top_level_, 0);
  const auto found = search_level(query, start, ef_search, 0, nullptr);
  SearchResult result;
  for (std::size_t i = 0; i < found.size() && i < k; ++i) result.neighbors.push_back({found[i].id, found[i].score});
  return result;
}

std::vector<Id> HnswGraph::visited_at_base(std::span<const float> query, std::size_t ef_search) const {
  ANNBENCH_CHECK(entry_.has_value(), "hnsw_search: empty graph");
  const Node start = greedy_descent(query, *entry_, top_level_, 0);
  std::vector<Node> visited;
  search_level(query, start, ef_search, 0, &visited);
  std::vector<Id> ids;
  for (Node n : visited) ids.push_back(store_.ids[n]);
  return ids;
}

SearchResult HnswGraph::search(std::span<const float> query, std::size_t k, std::optional<Id> exclude) const {
  const std::size_t want = exclude ? k + 1 : k;
  SearchResult r = search_ef(query, want, std::max(params_.ef_search, want));
  if (exclude)
    std::erase_if(r.neighbors, [&](const Neighbor& n) { return n.id == *exclude; });
  if (r.neighbors.size() > k) r.neighbors.resize(k);
  return r;
}

std::optional<std::vector<float>> HnswGraph::stored_vector(Id id) const {
  const auto it = node_of_.find(id);
  if (it == node_of_.end()) return std::nullopt;
  const auto v = store_.row(it->second);
  return std::vector<float>(v.begin(), v.end());
}

std::size_t HnswGraph::memory_bytes() const {
  std::size_t bytes = store_.memory_bytes() + levels_.size() * sizeof(int) +
                      node_of_.size() * (sizeof(Id) + sizeof(Node));
  for (const auto& per_level : links_)
    for (const auto& adj : per_level) bytes += adj.size() * sizeof(Node);
  return bytes;
}

// u32 M, u32 ef_construction, u32 ef_search, u8 selection, i32 top level, u32 entry node,
// vector store, then per node: u32 level and per level u32 degree + u32 neighbors.
void HnswGraph::save_payload(ByteWriter& out) const {
  out.put<std::uint32_t>(static_cast<std::uint32_t>(params_.M));
  out.put<std::uint32_t>(static_cast<std::uint32_t>(params_.ef_construction));
  out.put<std::uint32_t>(static_cast<std::uint32_t>(params_.ef_search));
  out.put<std::uint8_t>(static_cast<std::uint8_t>(params_.selection));
  out.put<std::int32_t>(top_level_);
  out.put<std::uint32_t>(entry_.value_or(0));
  store_.save(out);
  for (std::size_t n = 0; n < levels_.size(); ++n) {
    out.put<std::uint32_t>(static_cast<std::uint32_t>(levels_[n]));
    for (const auto& adj : links_[n]) {
      out.put<std::uint32_t>(static_cast<std::uint32_t>(adj.size()));
      out.put_array<Node>(adj);
    }
  }
}

HnswGraph HnswGraph::load(ByteReader& in) {
  HnswParams params;
  params.M = in.get<std::uint32_t>();
  params.ef_construction = in.get<std::uint32_t>();
  params.ef_search = in.get<std::uint32_t>();
  const auto selection = in.get<std::uint8_t>();
  ANNBENCH_CHECK(selection <= 1, "corrupt HNSW neighbor selection");
  params.selection = static_cast<NeighborSelection>(selection);
  const auto top = in.get<std::int32_t>();
  const auto entry = in.get<std::uint32_t>();
  VectorStore store = VectorStore::load(in);
  HnswGraph g(store.dim, params);
  g.store_ = std::move(store);
  g.top_level_ = top;
  const std::size_t n = g.store_.size();
  ANNBENCH_CHECK(n > 0 && entry < n, "corrupt HNSW entry point");
  g.entry_ = entry;
  for (std::size_t i = 0; i < n; ++i) g.node_of_.emplace(g.store_.ids[i], static_cast<Node>(i));
  g.levels_.resize(n);
  g.links_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto level = in.get<std::uint32_t>();
    ANNBENCH_CHECK(static_cast<std::int64_t>(level) <= top, "corrupt HNSW node level");
    g.levels_[i] = static_cast<int>(level);
    g.links_[i].resize(level + 1);
    for (auto& adj : g.links_[i]) {
      const auto degree = in.get<std::uint32_t>();
      adj = in.get_array<Node>(degree);
      for (Node nb : adj) ANNBENCH_CHECK(nb < n, "corrupt HNSW edge");
    }
  }
  return g;
}

std::string HnswGraph::describe() const {
  return "M=" + std::to_string(params_.M) + ",ef_construction=" + std::to_string(params_.ef_construction) +
         ",ef_search=" + std::to_string(params_.ef_search) +
         (params_.selection == NeighborSelection::Simple ? ",selection=simple" : ",selection=heuristic");
}

}  // namespace annbench

#include "annbench/protocol.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <string>

#include "annbench/error.hpp"
#include "annbench/label_metrics.hpp"

namespace annbench {

bool same_except_timing(const BenchReport& a, const BenchReport& b) {
  BenchReport x = a;
  BenchReport y = b;
  x.indexing_time_ms = y.indexing_time_ms = 0.0;
  x.avg_query_time_us = y.avg_query_time_us = 0.0;
  x.qps = y.qps = 0.0;
  return x == y;
}

std::vector<Id> sample_queries(const EmbeddingSet& set, std::size_t n, std::uint64_t seed) {
  ANNBENCH_CHECK(n <= set.size(), "n_queries=" + std::to_string(n) + " exceeds set size " + std::to_string(set.size()));
  std::vector<std::size_t> rows(set.size());
  std::iota(rows.begin(), rows.end(), 0);
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first n slots become the sample.
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, rows.size() - 1);
    std::swap(rows[i], rows[pick(rng)]);
  }
  std::vector<Id> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = set.id(rows[i]);
  return ids;
}

BenchReport run_protocol(const Index& index, const EmbeddingSet& set, const ProtocolConfig& config,
                         const GroundTruth* truth) {
  ANNBENCH_CHECK(config.k >= 1, "protocol: k must be at least 1");
  ANNBENCH_CHECK(config.recall_n >= 1, "protocol: recall_n must be at least 1");
  ANNBENCH_CHECK(config.n_queries >= 1, "protocol: n_queries must be at least 1");
  ANNBENCH_CHECK(index.size() == set.size() && index.dim() == set.dim(), "protocol: index was not built over this set");

  const auto queries = sample_queries(set, config.n_queries, config.seed);
  GroundTruth local_truth;
  if (truth == nullptr) {
    local_truth = ground_truth(set, queries, config.recall_n, index.metric());
    truth = &local_truth;
  }

  using Clock = std::chrono::steady_clock;
  for (std::size_t i = 0; i < std::min(config.warmup, queries.size()); ++i) {
    const Id q = queries[i];
    (void)index.search(set.vector(set.row_of(q)), config.k, q);
  }

  std::vector<SearchResult> results(queries.size());
  Clock::duration elapsed{};
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const Id q = queries[i];
    const auto query = set.vector(set.row_of(q));
    const auto start = Clock::now();
    results[i] = index.search(query, config.k, q);
    elapsed += Clock::now() - start;
  }

  std::vector<Outcome> outcomes;
  outcomes.reserve(queries.size());
  double precision_sum = 0.0;
  double recall_sum = 0.0;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const Id q = queries[i];
    const auto& result = results[i];
    ANNBENCH_CHECK(!result.empty(), "protocol: empty result for query " + std::to_string(q));
    Outcome o{set.label(set.row_of(q)), {}};
    for (const auto& n : result.neighbors) {
      ANNBENCH_CHECK(n.id != q, "protocol: query " + std::to_string(q) + " retrieved itself");
      o.retrieved.push_back(set.label(set.row_of(n.id)));
    }
    precision_sum += precision_at_k(o.truth, o.retrieved);

    const auto it = truth->find(q);
    ANNBENCH_CHECK(it != truth->end() && it->second.size() >= std::min(config.recall_n, set.size() - 1),
                   "protocol: ground truth missing for query " + std::to_string(q));
    const std::size_t n = std::min(config.recall_n, it->second.size());
    const auto ids = result.ids();
    const std::size_t top = std::min(n, ids.size());
    recall_sum += recall_at_n(std::span<const Id>(ids.data(), top), std::span<const Id>(it->second.data(), n));
    outcomes.push_back(std::move(o));
  }

  const LabelMetrics lm = label_metrics(outcomes);
  const double nq = static_cast<double>(queries.size());
  BenchReport r;
  r.family = std::string(family_name(index.family()));
  r.params = index.describe();
  r.metric = std::string(metric_name(index.metric()));
  r.n_queries = queries.size();
  r.k = config.k;
  r.recall_n = config.recall_n;
  r.seed = config.seed;
  r.memory_estimate_mb = static_cast<double>(index.memory_bytes()) / (1024.0 * 1024.0);
  r.index_size_mb = static_cast<double>(serialize_index(index).size()) / (1024.0 * 1024.0);
  r.precision = lm.micro_precision;
  r.recall = lm.micro_recall;
  r.f1 = lm.micro_f1;
  r.accuracy = lm.accuracy;
  r.macro_precision = lm.macro_precision;
  r.macro_recall = lm.macro_recall;
  r.macro_f1 = lm.macro_f1;
  r.precision_at_k = precision_sum / nq;
  r.recall_at_5 = recall_sum / nq;
  r.avg_query_time_us = std::chrono::duration<double, std::micro>(elapsed).count() / nq;
  r.qps = r.avg_query_time_us > 0.0 ? 1e6 / r.avg_query_time_us : 0.0;
  return r;
}

BenchReport bench_family(const EmbeddingSet& set, const NamedFamily& family, const ProtocolConfig& config,
                         std::uint64_t build_seed) {
  const bool normalize_first = std::holds_alternative<FlatIpParams>(family.params);
  const EmbeddingSet normalized = normalize_first ? set.normalized() : EmbeddingSet{};
  const EmbeddingSet& data = normalize_first ? normalized : set;

  const auto start = std::chrono::steady_clock::now();
  const auto index = build_index(data, family.params, build_seed);
  const auto built = std::chrono::steady_clock::now();

  BenchReport r = run_protocol(*index, data, config);
  r.family = family.name;
  r.indexing_time_ms = std::chrono::duration<double, std::milli>(built - start).count();
  return r;
}

}  // namespace annbench

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "annbench/exact_search.hpp"
#include "annbench/index.hpp"
#include "annbench/registry.hpp"

namespace annbench {

struct ProtocolConfig {
  std::size_t n_queries = 1000;
  std::size_t k = 6;         // neighbors retrieved per query, query itself excluded
  std::size_t recall_n = 5;  // size of the true-neighbor set for recall@n
  std::uint64_t seed = 0;
  std::size_t warmup = 10;   // untimed queries issued before the timed loop
};

// One row of the comparison table.
struct BenchReport {
  std::string family;
  std::string params;
  std::string metric;
  std::uint64_t n_queries = 0;
  std::uint64_t k = 0;
  std::uint64_t recall_n = 0;
  std::uint64_t seed = 0;

  double memory_estimate_mb = 0.0;
  double precision = 0.0;  // micro-averaged majority-vote prediction metrics
  double recall = 0.0;
  double f1 = 0.0;
  double recall_at_5 = 0.0;  // recall@recall_n against the exact oracle
  double index_size_mb = 0.0;
  double indexing_time_ms = 0.0;
  double avg_query_time_us = 0.0;
  double qps = 0.0;
  double accuracy = 0.0;
  double precision_at_k = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;

  friend bool operator==(const BenchReport&, const BenchReport&) = default;
};

/// Equality over every field except indexing_time_ms, avg_query_time_us and qps.
bool same_except_timing(const BenchReport& a, const BenchReport& b);

/// `n` distinct ids drawn without replacement with a seeded generator.
std::vector<Id> sample_queries(const EmbeddingSet& set, std::size_t n, std::uint64_t seed);

/// Runs the evaluation protocol over an index built on `set`. Leaves
/// indexing_time_ms at zero. Pass `truth` to reuse a precomputed oracle for the
/// sampled queries (it must hold at least recall_n neighbors per query under the
/// index's metric).
BenchReport run_protocol(const Index& index, const EmbeddingSet& set, const ProtocolConfig& config,
                         const GroundTruth* truth = nullptr);

/// Builds (timed) and evaluates one named family. flat-ip runs on a normalized copy of `set`.
BenchReport bench_family(const EmbeddingSet& set, const NamedFamily& family, const ProtocolConfig& config,
                         std::uint64_t build_seed);

}  // namespace annbench

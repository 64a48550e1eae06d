#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "annbench/hnsw.hpp"
#include "annbench/index.hpp"
#include "annbench/ivf.hpp"
#include "annbench/lsh.hpp"
#include "annbench/pq.hpp"
#include "annbench/rp_forest.hpp"

namespace annbench {

struct FlatL2Params {};
struct FlatIpParams {};

// Per-family build parameters. IvfParams covers IVF-Flat, IVF-PQ and IVF-SQ
// through its encoding field.
using IndexParams = std::variant<FlatL2Params, FlatIpParams, PqParams, IvfParams, LshParams, HnswParams, RpParams>;

/// Throws on zero counts or nprobe > nlist.
void validate(const IndexParams& params);

std::unique_ptr<Index> build_index(const EmbeddingSet& set, const IndexParams& params, std::uint64_t seed);

std::unique_ptr<Index> load_index(std::span<const std::uint8_t> bytes);
std::unique_ptr<Index> load_index_file(const std::filesystem::path& path);
void save_index_file(const Index& index, const std::filesystem::path& path);

// Benchmark family names: flat-l2, flat-ip, pq, ivf-flat, ivf-pq, ivf-sq, lsh,
// hnsw, annoy-angular, annoy-euclidean, annoy-manhattan.
struct NamedFamily {
  std::string name;
  IndexParams params;
};

/// Default parameters for a benchmark family name. Throws on an unknown name.
NamedFamily family_defaults(std::string_view name);
/// The ten configurations of the comparison table, in report order.
std::vector<std::string> benchmark_families();

}  // namespace annbench

#include "annbench/lsh.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <string>

#include "annbench/error.hpp"

namespace annbench {

std::size_t hamming(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += static_cast<std::size_t>(std::popcount(a[i] ^ b[i]));
  return d;
}

LshIndex LshIndex::build(const EmbeddingSet& set, const LshParams& params, std::uint64_t seed) {
  ANNBENCH_CHECK(!set.empty(), "cannot build an index over an empty set");
  ANNBENCH_CHECK(params.nbits >= 1, "lsh_build: nbits must be at least 1");
  LshIndex index;
  index.params_ = params;
  index.words_ = (params.nbits + 63) / 64;
  index.store_ = VectorStore::from_set(set);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  index.hyperplanes_.resize(params.nbits * set.dim());
  for (float& h : index.hyperplanes_) h = static_cast<float>(gauss(rng));

  index.codes_.reserve(set.size() * index.words_);
  for (std::size_t r = 0; r < set.size(); ++r) {
    const auto c = index.code(set.vector(r));
    index.codes_.insert(index.codes_.end(), c.begin(), c.end());
  }
  return index;
}

LshCode LshIndex::code(std::span<const float> v) const {
  ANNBENCH_CHECK(v.size() == store_.dim, "lsh: dimension mismatch");
  LshCode out(words_, 0);
  for (std::size_t b = 0; b < params_.nbits; ++b) {
    if (detail::dot(hyperplanes_.data() + b * store_.dim, v.data(), store_.dim) >= 0.0)
      out[b / 64] |= std::uint64_t{1} << (b % 64);
  }
  return out;
}

SearchResult LshIndex::search_mode(std::span<const float> query, std::size_t k, bool rerank,
                                   std::optional<Id> exclude) const {
  ANNBENCH_CHECK(k >= 1, "k must be at least 1");
  const LshCode q = code(query);
  struct Ranked {
    std::size_t hamming;
    Id id;
    std::size_t row;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(store_.size());
  for (std::size_t r = 0; r < store_.size(); ++r) {
    if (exclude && store_.ids[r] == *exclude) continue;
    ranked.push_back({hamming(q, stored_code(r)), store_.ids[r], r});
  }
  const std::size_t pool = std::min(ranked.size(), rerank ? 4 * k : k);
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(pool), ranked.end(),
                    [](const Ranked& a, const Ranked& b) { return a.hamming != b.hamming ? a.hamming < b.hamming : a.id < b.id; });
  ranked.resize(pool);

  std::vector<Neighbor> out;
  out.reserve(pool);
  for (const auto& r : ranked)
    out.push_back({r.id, rerank ? distance(Metric::L2, query, store_.row(r.row)) : static_cast<float>(r.hamming)});
  return take_top_k(std::move(out), k, false);
}

SearchResult LshIndex::search(std::span<const float> query, std::size_t k, std::optional<Id> exclude) const {
  return search_mode(query, k, params_.rerank, exclude);
}

std::optional<std::vector<float>> LshIndex::stored_vector(Id id) const {
  const auto row = store_.find(id);
  if (!row) return std::nullopt;
  const auto v = store_.row(*row);
  return std::vector<float>(v.begin(), v.end());
}

std::size_t LshIndex::memory_bytes() const {
  return store_.memory_bytes() + hyperplanes_.size() * sizeof(float) + codes_.size() * sizeof(std::uint64_t);
}

// u32 nbits, u8 rerank, nbits*dim x f32 hyperplanes, vector store, codes.
void LshIndex::save_payload(ByteWriter& out) const {
  out.put<std::uint32_t>(static_cast<std::uint32_t>(params_.nbits));
  out.put<std::uint8_t>(params_.rerank ? 1 : 0);
  store_.save(out);
  out.put_array<float>(hyperplanes_);
  out.put_array<std::uint64_t>(codes_);
}

LshIndex LshIndex::load(ByteReader& in) {
  LshIndex index;
  index.params_.nbits = in.get<std::uint32_t>();
  index.params_.rerank = in.get<std::uint8_t>() != 0;
  ANNBENCH_CHECK(index.params_.nbits >= 1, "corrupt LSH header");
  index.words_ = (index.params_.nbits + 63) / 64;
  index.store_ = VectorStore::load(in);
  index.hyperplanes_ = in.get_array<float>(index.params_.nbits * index.store_.dim);
  index.codes_ = in.get_array<std::uint64_t>(index.store_.size() * index.words_);
  return index;
}

std::string LshIndex::describe() const {
  return "nbits=" + std::to_string(params_.nbits) + ",rerank=" + (params_.rerank ? "on" : "off");
}

}  // namespace annbench

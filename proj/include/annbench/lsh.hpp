#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "annbench/index.hpp"

namespace annbench {

struct LshParams {
  std::size_t nbits = 128;
  bool rerank = true;
};

using LshCode = std::vector<std::uint64_t>;

std::size_t hamming(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

// Sign-of-projection codes over nbits Gaussian hyperplanes through the origin.
// Search ranks every id by Hamming distance; with rerank the best 4k are
// re-scored by exact L2.
class LshIndex final : public Index {
 public:
  static LshIndex build(const EmbeddingSet& set, const LshParams& params, std::uint64_t seed);
  static LshIndex load(ByteReader& in);

  /// Bit i is set iff hyperplane_i . v >= 0.
  LshCode code(std::span<const float> v) const;
  std::span<const std::uint64_t> stored_code(std::size_t row) const {
    return {codes_.data() + row * words_, words_};
  }

  SearchResult search_mode(std::span<const float> query, std::size_t k, bool rerank,
                           std::optional<Id> exclude = std::nullopt) const;

  Family family() const override { return Family::Lsh; }
  Metric metric() const override { return Metric::L2; }
  std::size_t dim() const override { return store_.dim; }
  std::size_t size() const override { return store_.size(); }
  SearchResult search(std::span<const float> query, std::size_t k,
                      std::optional<Id> exclude = std::nullopt) const override;
  std::optional<std::vector<float>> stored_vector(Id id) const override;
  std::size_t memory_bytes() const override;
  void save_payload(ByteWriter& out) const override;
  std::string describe() const override;

  const LshParams& params() const { return params_; }
  std::size_t words() const { return words_; }

 private:
  LshIndex() = default;

  LshParams params_;
  std::size_t words_ = 0;
  std::vector<float> hyperplanes_;  // nbits x dim
  VectorStore store_;
  std::vector<std::uint64_t> codes_;  // size() x words_
};

}  // namespace annbench

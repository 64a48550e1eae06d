#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "annbench/index.hpp"
#include "annbench/kmeans.hpp"

namespace annbench {

using PqCode = std::vector<std::uint8_t>;

// m independent sub-codebooks of ks = 2^nbits centroids over contiguous
// sub-vectors of length dim / m.
struct PqCodebook {
  std::size_t dim = 0;
  std::size_t m = 0;
  std::size_t nbits = 0;
  std::vector<Centroids> subspaces;

  std::size_t ks() const { return std::size_t{1} << nbits; }
  std::size_t sub_dim() const { return dim / m; }
  std::size_t memory_bytes() const { return m * ks() * sub_dim() * sizeof(float); }

  void save(ByteWriter& out) const;
  static PqCodebook load(ByteReader& in);
};

/// Throws if m does not divide dim, nbits is outside [1, 8] or 2^nbits exceeds the point count.
PqCodebook pq_train(std::span<const float> data, std::size_t dim, std::size_t m, std::size_t nbits,
                    std::uint64_t seed, const KMeansOptions& options = {});

PqCode pq_encode(const PqCodebook& cb, std::span<const float> v);
std::vector<float> pq_decode(const PqCodebook& cb, std::span<const std::uint8_t> code);

// Per-query table of squared L2 distances from each query sub-vector to every
// sub-centroid; a code scores sqrt(sum of its m lookups).
class AdcTable {
 public:
  AdcTable(const PqCodebook& cb, std::span<const float> query);
  float score(std::span<const std::uint8_t> code) const;

 private:
  std::size_t m_;
  std::size_t ks_;
  std::vector<double> table_;
};

// Ids plus their codes packed m bytes apiece.
struct PqCodes {
  std::size_t m = 0;
  std::vector<Id> ids;
  std::vector<std::uint8_t> codes;

  std::size_t size() const { return ids.size(); }
  std::span<const std::uint8_t> code(std::size_t i) const { return {codes.data() + i * m, m}; }
  void add(Id id, std::span<const std::uint8_t> code);
};

SearchResult pq_adc_search(const PqCodebook& cb, const PqCodes& codes, std::span<const float> query,
                           std::size_t k, std::optional<Id> exclude = std::nullopt);

struct PqParams {
  std::size_t m = 8;
  std::size_t nbits = 8;
};

/// Largest divisor of dim not above 8.
std::size_t default_pq_m(std::size_t dim);

class PqIndex final : public Index {
 public:
  PqIndex(PqCodebook codebook, PqCodes codes);
  static PqIndex build(const EmbeddingSet& set, const PqParams& params, std::uint64_t seed);
  static PqIndex load(ByteReader& in);

  Family family() const override { return Family::Pq; }
  Metric metric() const override { return Metric::L2; }
  std::size_t dim() const override { return codebook_.dim; }
  std::size_t size() const override { return codes_.size(); }
  SearchResult search(std::span<const float> query, std::size_t k,
                      std::optional<Id> exclude = std::nullopt) const override;
  std::size_t memory_bytes() const override;
  void save_payload(ByteWriter& out) const override;
  std::string describe() const override;

  const PqCodebook& codebook() const { return codebook_; }
  const PqCodes& codes() const { return codes_; }

 private:
  PqCodebook codebook_;
  PqCodes codes_;
};

}  // namespace annbench

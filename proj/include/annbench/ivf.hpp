#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "annbench/index.hpp"
#include "annbench/kmeans.hpp"
#include "annbench/pq.hpp"
#include "annbench/sq.hpp"

namespace annbench {

enum class IvfEncoding : std::uint8_t { Flat, Pq, Sq };

struct IvfParams {
  std::size_t nlist = 0;   // 0 picks max(1, round(sqrt(N)))
  std::size_t nprobe = 0;  // 0 picks max(1, nlist / 8)
  IvfEncoding encoding = IvfEncoding::Flat;
  PqParams pq;             // used when encoding == Pq; pq.m == 0 picks default_pq_m
};

std::size_t default_nlist(std::size_t n);
std::size_t default_nprobe(std::size_t nlist);

// One partition. Payload layout depends on the encoding: raw vectors (Flat),
// m-byte PQ codes (Pq) or dim-byte SQ codes (Sq), one entry per id.
struct InvertedList {
  std::vector<Id> ids;
  std::vector<float> vectors;
  std::vector<std::uint8_t> codes;
};

// Inverted file over nlist coarse L2 centroids. PQ and SQ encode raw vectors,
// not residuals, and are trained on the whole set.
class IvfIndex final : public Index {
 public:
  static IvfIndex build(const EmbeddingSet& set, const IvfParams& params, std::uint64_t seed);
  static IvfIndex load(Family family, ByteReader& in);

  Family family() const override;
  Metric metric() const override { return Metric::L2; }
  std::size_t dim() const override { return coarse_.dim; }
  std::size_t size() const override { return count_; }
  SearchResult search(std::span<const float> query, std::size_t k,
                      std::optional<Id> exclude = std::nullopt) const override;
  std::optional<std::vector<float>> stored_vector(Id id) const override;
  std::size_t memory_bytes() const override;
  void save_payload(ByteWriter& out) const override;
  std::string describe() const override;

  /// Throws unless 1 <= nprobe <= nlist.
  SearchResult search(std::span<const float> query, std::size_t k, std::size_t nprobe,
                      std::optional<Id> exclude = std::nullopt) const;
  /// Lists scanned for `query`, nearest centroid first.
  std::vector<std::size_t> probe_order(std::span<const float> query, std::size_t nprobe) const;
  /// Every id the search would score with this nprobe.
  std::vector<Id> candidate_ids(std::span<const float> query, std::size_t nprobe) const;

  std::size_t nlist() const { return coarse_.k; }
  std::size_t default_probe() const { return nprobe_; }
  IvfEncoding encoding() const { return encoding_; }
  const Centroids& coarse() const { return coarse_; }
  const std::vector<InvertedList>& lists() const { return lists_; }
  const PqCodebook& codebook() const { return pq_; }
  const SqParams& sq_params() const { return sq_; }

 private:
  IvfIndex() = default;

  IvfEncoding encoding_ = IvfEncoding::Flat;
  std::size_t nprobe_ = 1;
  std::size_t count_ = 0;
  Centroids coarse_;
  PqCodebook pq_;
  SqParams sq_;
  std::vector<InvertedList> lists_;
};

}  // namespace annbench

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <unordered_map>
#include <vector>

#include "annbench/metric.hpp"

namespace annbench {

struct EmbeddingRecord {
  Id id = 0;
  Label label = 0;
  std::vector<float> vector;
};

// Labeled fixed-dimension vectors stored row-major in one contiguous buffer.
// Read-only after construction; safe to share across searching threads.
class EmbeddingSet {
 public:
  EmbeddingSet() = default;
  explicit EmbeddingSet(std::size_t dim);

  /// Appends one record. Throws on wrong length, non-finite component or duplicate id.
  void add(Id id, Label label, std::span<const float> vector);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  Id id(std::size_t row) const { return ids_[row]; }
  Label label(std::size_t row) const { return labels_[row]; }
  std::span<const float> vector(std::size_t row) const {
    return {data_.data() + row * dim_, dim_};
  }
  EmbeddingRecord record(std::size_t row) const;

  const std::vector<Id>& ids() const { return ids_; }
  const std::vector<Label>& labels() const { return labels_; }
  const std::vector<float>& data() const { return data_; }

  bool contains(Id id) const { return row_of_.count(id) != 0; }
  /// Row holding `id`. Throws if absent.
  std::size_t row_of(Id id) const;

  /// Copy with every vector scaled to unit L2 norm.
  EmbeddingSet normalized() const;

  friend bool operator==(const EmbeddingSet& a, const EmbeddingSet& b) {
    return a.dim_ == b.dim_ && a.ids_ == b.ids_ && a.labels_ == b.labels_ && a.data_ == b.data_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Id> ids_;
  std::vector<Label> labels_;
  std::vector<float> data_;
  std::unordered_map<Id, std::size_t> row_of_;
};

/// Gaussian blobs around `n_classes` centroids drawn uniformly in [-1, 1]^dim.
/// Ids run 0.. in class-major order; label is the class index.
EmbeddingSet gen_synthetic(std::size_t n_classes, std::size_t per_class, std::size_t dim,
                           double spread, std::uint64_t seed);

// VEMB: "VEMB", u8 version=1, u32 dim, u64 count, then {u64 id, u32 label, f32 x dim}.
std::vector<std::uint8_t> encode_vemb(const EmbeddingSet& set);
EmbeddingSet decode_vemb(std::span<const std::uint8_t> bytes);
void write_vemb(const EmbeddingSet& set, const std::filesystem::path& path);
EmbeddingSet read_vemb(const std::filesystem::path& path);

// CSV with header id,label,f0,...,f{dim-1}.
EmbeddingSet read_csv(const std::filesystem::path& path);
void write_csv(const EmbeddingSet& set, const std::filesystem::path& path);

}  // namespace annbench

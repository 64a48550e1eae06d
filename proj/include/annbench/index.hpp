#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "annbench/binary_io.hpp"
#include "annbench/embedding_set.hpp"
#include "annbench/search_result.hpp"

namespace annbench {

// Family tags of the VIDX framing. Values are part of the file format.
enum class Family : std::uint8_t {
  FlatL2 = 0,
  FlatIP = 1,
  Pq = 2,
  IvfFlat = 3,
  IvfPq = 4,
  IvfSq = 5,
  Lsh = 6,
  Hnsw = 7,
  RpForest = 8,
};

std::string_view family_name(Family f);

// Uniform search contract implemented by every index family. Built indexes are
// immutable; search is const and safe to call concurrently.
class Index {
 public:
  virtual ~Index() = default;

  virtual Family family() const = 0;
  /// Metric in which `search` ranks results; the ground-truth metric for this index.
  virtual Metric metric() const = 0;
  virtual std::size_t dim() const = 0;
  virtual std::size_t size() const = 0;

  virtual SearchResult search(std::span<const float> query, std::size_t k,
                              std::optional<Id> exclude = std::nullopt) const = 0;

  /// Raw vector for `id` when the family keeps uncompressed vectors.
  virtual std::optional<std::vector<float>> stored_vector(Id /*id*/) const { return std::nullopt; }

  /// Sum of the byte sizes of the structure's components.
  virtual std::size_t memory_bytes() const = 0;
  /// Family-specific payload that follows the VIDX header.
  virtual void save_payload(ByteWriter& out) const = 0;
  /// Compact parameter echo, e.g. "nlist=98,nprobe=12".
  virtual std::string describe() const = 0;
};

inline constexpr std::uint8_t kVidxVersion = 1;

/// "VIDX", u8 version, u8 family tag, payload.
std::vector<std::uint8_t> serialize_index(const Index& index);
/// Validates the VIDX header and returns the family tag; `reader` is left at the payload.
Family read_vidx_header(ByteReader& reader);

// Ids plus row-major vectors. Shared storage for the families that keep raw vectors.
struct VectorStore {
  std::size_t dim = 0;
  std::vector<Id> ids;
  std::vector<float> data;

  static VectorStore from_set(const EmbeddingSet& set);

  std::size_t size() const { return ids.size(); }
  std::span<const float> row(std::size_t i) const { return {data.data() + i * dim, dim}; }
  std::optional<std::size_t> find(Id id) const;
  std::size_t memory_bytes() const { return ids.size() * sizeof(Id) + data.size() * sizeof(float); }

  // u32 dim, u64 count, count x u64 id, count*dim x f32
  void save(ByteWriter& out) const;
  static VectorStore load(ByteReader& in);
};

// Exhaustive index: L2 distance (FlatL2) or dot-product similarity (FlatIP).
class FlatIndex final : public Index {
 public:
  FlatIndex(Metric metric, VectorStore store);
  static FlatIndex build(const EmbeddingSet& set, Metric metric);
  static FlatIndex load(Family family, ByteReader& in);

  Family family() const override;
  Metric metric() const override { return metric_; }
  std::size_t dim() const override { return store_.dim; }
  std::size_t size() const override { return store_.size(); }
  SearchResult search(std::span<const float> query, std::size_t k,
                      std::optional<Id> exclude = std::nullopt) const override;
  std::optional<std::vector<float>> stored_vector(Id id) const override;
  std::size_t memory_bytes() const override { return store_.memory_bytes(); }
  void save_payload(ByteWriter& out) const override { store_.save(out); }
  std::string describe() const override { return {}; }

 private:
  Metric metric_;
  VectorStore store_;
};

}  // namespace annbench

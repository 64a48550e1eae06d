#include "annbench/index.hpp"

#include "annbench/error.hpp"
#include "annbench/exact_search.hpp"

namespace annbench {

std::string_view family_name(Family f) {
  switch (f) {
    case Family::FlatL2: return "flat-l2";
    case Family::FlatIP: return "flat-ip";
    case Family::Pq: return "pq";
    case Family::IvfFlat: return "ivf-flat";
    case Family::IvfPq: return "ivf-pq";
    case Family::IvfSq: return "ivf-sq";
    case Family::Lsh: return "lsh";
    case Family::Hnsw: return "hnsw";
    case Family::RpForest: return "rp-forest";
  }
  return "unknown";
}

std::vector<std::uint8_t> serialize_index(const Index& index) {
  ByteWriter out;
  out.put_raw(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>("VIDX"), 4));
  out.put<std::uint8_t>(kVidxVersion);
  out.put<std::uint8_t>(static_cast<std::uint8_t>(index.family()));
  index.save_payload(out);
  return out.take();
}

Family read_vidx_header(ByteReader& reader) {
  reader.expect_magic("VIDX");
  const auto version = reader.get<std::uint8_t>();
  ANNBENCH_CHECK(version == kVidxVersion, "unsupported VIDX version " + std::to_string(version));
  const auto tag = reader.get<std::uint8_t>();
  ANNBENCH_CHECK(tag <= static_cast<std::uint8_t>(Family::RpForest),
                 "unknown VIDX family tag " + std::to_string(tag));
  return static_cast<Family>(tag);
}

VectorStore VectorStore::from_set(const EmbeddingSet& set) {
  ANNBENCH_CHECK(!set.empty(), "cannot build an index over an empty set");
  return {set.dim(), set.ids(), set.data()};
}

std::optional<std::size_t> VectorStore::find(Id id) const {
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == id) return i;
  return std::nullopt;
}

void VectorStore::save(ByteWriter& out) const {
  out.put<std::uint32_t>(static_cast<std::uint32_t>(dim));
  out.put<std::uint64_t>(ids.size());
  out.put_array<Id>(ids);
  out.put_array<float>(data);
}

VectorStore VectorStore::load(ByteReader& in) {
  VectorStore s;
  s.dim = in.get<std::uint32_t>();
  const auto count = in.get<std::uint64_t>();
  ANNBENCH_CHECK(s.dim > 0, "vector store: zero dimension");
  s.ids = in.get_array<Id>(count);
  ANNBENCH_CHECK(count <= in.remaining() / sizeof(float) / s.dim, "truncated vector store");
  s.data = in.get_array<float>(count * s.dim);
  return s;
}

FlatIndex::FlatIndex(Metric metric, VectorStore store) : metric_(metric), store_(std::move(store)) {
  ANNBENCH_CHECK(metric == Metric::L2 || metric == Metric::InnerProduct,
                 "flat index supports L2 and inner product only");
}

FlatIndex FlatIndex::build(const EmbeddingSet& set, Metric metric) {
  return FlatIndex(metric, VectorStore::from_set(set));
}

FlatIndex FlatIndex::load(Family family, ByteReader& in) {
  ANNBENCH_CHECK(family == Family::FlatL2 || family == Family::FlatIP, "not a flat index");
  return FlatIndex(family == Family::FlatL2 ? Metric::L2 : Metric::InnerProduct, VectorStore::load(in));
}

Family FlatIndex::family() const { return metric_ == Metric::L2 ? Family::FlatL2 : Family::FlatIP; }

SearchResult FlatIndex::search(std::span<const float> query, std::size_t k,
                               std::optional<Id> exclude) const {
  return exact_scan(store_.ids, store_.data, store_.dim, query, k, metric_, exclude);
}

std::optional<std::vector<float>> FlatIndex::stored_vector(Id id) const {
  const auto row = store_.find(id);
  if (!row) return std::nullopt;
  const auto v = store_.row(*row);
  return std::vector<float>(v.begin(), v.end());
}

}  // namespace annbench

#include "annbench/registry.hpp"

#include "annbench/binary_io.hpp"
#include "annbench/error.hpp"

namespace annbench {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

void validate(const IndexParams& params) {
  std::visit(Overloaded{
                 [](const FlatL2Params&) {},
                 [](const FlatIpParams&) {},
                 [](const PqParams& p) { ANNBENCH_CHECK(p.nbits >= 1 && p.nbits <= 8, "pq: nbits must be in [1, 8]"); },
                 [](const IvfParams& p) {
                   if (p.nlist != 0 && p.nprobe != 0)
                     ANNBENCH_CHECK(p.nprobe <= p.nlist, "ivf: nprobe must not exceed nlist");
                   if (p.encoding == IvfEncoding::Pq)
                     ANNBENCH_CHECK(p.pq.nbits >= 1 && p.pq.nbits <= 8, "ivf-pq: nbits must be in [1, 8]");
                 },
                 [](const LshParams& p) { ANNBENCH_CHECK(p.nbits >= 1, "lsh: nbits must be positive"); },
                 [](const HnswParams& p) {
                   ANNBENCH_CHECK(p.M >= 2, "hnsw: M must be at least 2");
                   ANNBENCH_CHECK(p.ef_construction >= 1 && p.ef_search >= 1, "hnsw: ef values must be positive");
                 },
                 [](const RpParams& p) {
                   ANNBENCH_CHECK(p.n_trees >= 1 && p.leaf_size >= 1, "rp-forest: counts must be positive");
                   ANNBENCH_CHECK(p.metric != Metric::InnerProduct, "rp-forest: inner product is not supported");
                 },
             },
             params);
}

std::unique_ptr<Index> build_index(const EmbeddingSet& set, const IndexParams& params, std::uint64_t seed) {
  validate(params);
  return std::visit(
      Overloaded{
          [&](const FlatL2Params&) -> std::unique_ptr<Index> {
            return std::make_unique<FlatIndex>(FlatIndex::build(set, Metric::L2));
          },
          [&](const FlatIpParams&) -> std::unique_ptr<Index> {
            return std::make_unique<FlatIndex>(FlatIndex::build(set, Metric::InnerProduct));
          },
          [&](const PqParams& p) -> std::unique_ptr<Index> { return std::make_unique<PqIndex>(PqIndex::build(set, p, seed)); },
          [&](const IvfParams& p) -> std::unique_ptr<Index> { return std::make_unique<IvfIndex>(IvfIndex::build(set, p, seed)); },
          [&](const LshParams& p) -> std::unique_ptr<Index> { return std::make_unique<LshIndex>(LshIndex::build(set, p, seed)); },
          [&](const HnswParams& p) -> std::unique_ptr<Index> {
            return std::make_unique<HnswGraph>(HnswGraph::build(set, p, seed));
          },
          [&](const RpParams& p) -> std::unique_ptr<Index> { return std::make_unique<RpForest>(RpForest::build(set, p, seed)); },
      },
      params);
}

std::unique_ptr<Index> load_index(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  const Family family = read_vidx_header(in);
  std::unique_ptr<Index> index;
  switch (family) {
    case Family::FlatL2:
    case Family::FlatIP: index = std::make_unique<FlatIndex>(FlatIndex::load(family, in)); break;
    case Family::Pq: index = std::make_unique<PqIndex>(PqIndex::load(in)); break;
    case Family::IvfFlat:
    case Family::IvfPq:
    case Family::IvfSq: index = std::make_unique<IvfIndex>(IvfIndex::load(family, in)); break;
    case Family::Lsh: index = std::make_unique<LshIndex>(LshIndex::load(in)); break;
    case Family::Hnsw: index = std::make_unique<HnswGraph>(HnswGraph::load(in)); break;
    case Family::RpForest: index = std::make_unique<RpForest>(RpForest::load(in)); break;
  }
  ANNBENCH_CHECK(in.done(), "VIDX: trailing bytes after payload");
  return index;
}

std::unique_ptr<Index> load_index_file(const std::filesystem::path& path) {
  return load_index(read_file_bytes(path.string()));
}

void save_index_file(const Index& index, const std::filesystem::path& path) {
  write_file_bytes(path.string(), serialize_index(index));
}

NamedFamily family_defaults(std::string_view name) {
  const std::string n(name);
  if (n == "flat-l2") return {n, FlatL2Params{}};
  if (n == "flat-ip") return {n, FlatIpParams{}};
  if (n == "pq") return {n, PqParams{0, 8}};
  if (n == "ivf-flat") return {n, IvfParams{0, 0, IvfEncoding::Flat, {0, 8}}};
  if (n == "ivf-pq") return {n, IvfParams{0, 0, IvfEncoding::Pq, {0, 8}}};
  if (n == "ivf-sq") return {n, IvfParams{0, 0, IvfEncoding::Sq, {0, 8}}};
  if (n == "lsh") return {n, LshParams{}};
  if (n == "hnsw") return {n, HnswParams{}};
  if (n == "annoy-angular") return {n, RpParams{10, 16, 0, Metric::Angular}};
  if (n == "annoy-euclidean") return {n, RpParams{10, 16, 0, Metric::L2}};
  if (n == "annoy-manhattan") return {n, RpParams{10, 16, 0, Metric::Manhattan}};
  throw Error("unknown index family: " + n);
}

std::vector<std::string> benchmark_families() {
  return {"annoy-angular", "annoy-euclidean", "annoy-manhattan", "flat-l2", "flat-ip",
          "pq",            "ivf-pq",          "ivf-sq",          "lsh",     "hnsw"};
}

}  // namespace annbench

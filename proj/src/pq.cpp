#include "annbench/pq.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "annbench/error.hpp"
#include "annbench/random.hpp"

namespace annbench {

void PqCodebook::save(ByteWriter& out) const {
  out.put<std::uint32_t>(static_cast<std::uint32_t>(dim));
  out.put<std::uint32_t>(static_cast<std::uint32_t>(m));
  out.put<std::uint32_t>(static_cast<std::uint32_t>(nbits));
  for (const auto& s : subspaces) s.save(out);
}

PqCodebook PqCodebook::load(ByteReader& in) {
  PqCodebook cb;
  cb.dim = in.get<std::uint32_t>();
  cb.m = in.get<std::uint32_t>();
  cb.nbits = in.get<std::uint32_t>();
  ANNBENCH_CHECK(cb.m > 0 && cb.dim % cb.m == 0 && cb.nbits >= 1 && cb.nbits <= 8, "corrupt PQ codebook header");
  for (std::size_t s = 0; s < cb.m; ++s) {
    cb.subspaces.push_back(Centroids::load(in));
    ANNBENCH_CHECK(cb.subspaces.back().k == cb.ks() && cb.subspaces.back().dim == cb.sub_dim(),
                   "corrupt PQ sub-codebook");
  }
  return cb;
}

PqCodebook pq_train(std::span<const float> data, std::size_t dim, std::size_t m, std::size_t nbits,
                    std::uint64_t seed, const KMeansOptions& options) {
  ANNBENCH_CHECK(dim > 0 && data.size() % dim == 0 && !data.empty(), "pq_train: bad data shape");
  ANNBENCH_CHECK(m >= 1 && dim % m == 0,
                 "pq_train: m=" + std::to_string(m) + " does not divide dim=" + std::to_string(dim));
  ANNBENCH_CHECK(nbits >= 1 && nbits <= 8, "pq_train: nbits must be in [1, 8]");
  const std::size_t n = data.size() / dim;
  PqCodebook cb{dim, m, nbits, {}};
  ANNBENCH_CHECK(cb.ks() <= n, "pq_train: 2^nbits=" + std::to_string(cb.ks()) + " exceeds " +
                                   std::to_string(n) + " training points");

  const std::size_t sub = cb.sub_dim();
  std::vector<float> slice(n * sub);
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t d = 0; d < sub; ++d) slice[i * sub + d] = data[i * dim + s * sub + d];
    cb.subspaces.push_back(kmeans_fit(slice, sub, cb.ks(), derive_seed(seed, s), options));
  }
  return cb;
}

PqCode pq_encode(const PqCodebook& cb, std::span<const float> v) {
  ANNBENCH_CHECK(v.size() == cb.dim, "pq_encode: dimension mismatch");
  const std::size_t sub = cb.sub_dim();
  PqCode code(cb.m);
  for (std::size_t s = 0; s < cb.m; ++s)
    code[s] = static_cast<std::uint8_t>(cb.subspaces[s].nearest(v.subspan(s * sub, sub)));
  return code;
}

std::vector<float> pq_decode(const PqCodebook& cb, std::span<const std::uint8_t> code) {
  ANNBENCH_CHECK(code.size() == cb.m, "pq_decode: code length mismatch");
  std::vector<float> out;
  out.reserve(cb.dim);
  for (std::size_t s = 0; s < cb.m; ++s) {
    ANNBENCH_CHECK(code[s] < cb.ks(), "pq_decode: code out of range");
    const auto c = cb.subspaces[s].row(code[s]);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

AdcTable::AdcTable(const PqCodebook& cb, std::span<const float> query)
    : m_(cb.m), ks_(cb.ks()), table_(cb.m * cb.ks()) {
  ANNBENCH_CHECK(query.size() == cb.dim, "ADC: query dimension mismatch");
  const std::size_t sub = cb.sub_dim();
  for (std::size_t s = 0; s < m_; ++s) {
    const float* q = query.data() + s * sub;
    for (std::size_t c = 0; c < ks_; ++c)
      table_[s * ks_ + c] = detail::squared_l2(q, cb.subspaces[s].row(c).data(), sub);
  }
}

float AdcTable::score(std::span<const std::uint8_t> code) const {
  double acc = 0.0;
  for (std::size_t s = 0; s < m_; ++s) acc += table_[s * ks_ + code[s]];
  return static_cast<float>(std::sqrt(acc));
}

void PqCodes::add(Id id, std::span<const std::uint8_t> code) {
  ANNBENCH_CHECK(code.size() == m, "PQ code length mismatch");
  ids.push_back(id);
  codes.insert(codes.end(), code.begin(), code.end());
}

SearchResult pq_adc_search(const PqCodebook& cb, const PqCodes& codes, std::span<const float> query,
                           std::size_t k, std::optional<Id> exclude) {
  ANNBENCH_CHECK(k >= 1, "k must be at least 1");
  const AdcTable table(cb, query);
  std::vector<Neighbor> candidates;
  candidates.reserve(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (exclude && codes.ids[i] == *exclude) continue;
    candidates.push_back({codes.ids[i], table.score(codes.code(i))});
  }
  return take_top_k(std::move(candidates), k, false);
}

std::size_t default_pq_m(std::size_t dim) {
  for (std::size_t m = 8; m > 1; --m)
    if (dim % m == 0) return m;
  return 1;
}

PqIndex::PqIndex(PqCodebook codebook, PqCodes codes) : codebook_(std::move(codebook)), codes_(std::move(codes)) {}

PqIndex PqIndex::build(const EmbeddingSet& set, const PqParams& params, std::uint64_t seed) {
  ANNBENCH_CHECK(!set.empty(), "cannot build an index over an empty set");
  const std::size_t m = params.m == 0 ? default_pq_m(set.dim()) : params.m;
  PqCodebook cb = pq_train(set.data(), set.dim(), m, params.nbits, seed);
  PqCodes codes{m, {}, {}};
  codes.ids.reserve(set.size());
  codes.codes.reserve(set.size() * m);
  for (std::size_t r = 0; r < set.size(); ++r) codes.add(set.id(r), pq_encode(cb, set.vector(r)));
  return PqIndex(std::move(cb), std::move(codes));
}

PqIndex PqIndex::load(ByteReader& in) {
  PqCodebook cb = PqCodebook::load(in);
  PqCodes codes{cb.m, {}, {}};
  const auto count = in.get<std::uint64_t>();
  codes.ids = in.get_array<Id>(count);
  ANNBENCH_CHECK(count <= in.remaining() / cb.m, "truncated PQ codes");
  codes.codes = in.get_array<std::uint8_t>(count * cb.m);
  return PqIndex(std::move(cb), std::move(codes));
}

SearchResult PqIndex::search(std::span<const float> query, std::size_t k, std::optional<Id> exclude) const {
  return pq_adc_search(codebook_, codes_, query, k, exclude);
}

std::size_t PqIndex::memory_bytes() const {
  return codebook_.memory_bytes() + codes_.ids.size() * sizeof(Id) + codes_.codes.size();
}

void PqIndex::save_payload(ByteWriter& out) const {
  codebook_.save(out);
  out.put<std::uint64_t>(codes_.size());
  out.put_array<Id>(codes_.ids);
  out.put_array<std::uint8_t>(codes_.codes);
}

std::string PqIndex::describe() const {
  return "m=" + std::to_string(codebook_.m) + ",nbits=" + std::to_string(codebook_.nbits);
}

}  // namespace annbench

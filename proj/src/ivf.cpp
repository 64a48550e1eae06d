#include "annbench/ivf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "annbench/error.hpp"
#include "annbench/random.hpp"

namespace annbench {

std::size_t default_nlist(std::size_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n)))));
}

std::size_t default_nprobe(std::size_t nlist) { return std::max<std::size_t>(1, nlist / 8); }

IvfIndex IvfIndex::build(const EmbeddingSet& set, const IvfParams& params, std::uint64_t seed) {
  ANNBENCH_CHECK(!set.empty(), "cannot build an index over an empty set");
  const std::size_t nlist = params.nlist == 0 ? default_nlist(set.size()) : params.nlist;
  ANNBENCH_CHECK(nlist <= set.size(), "ivf_build: nlist=" + std::to_string(nlist) + " exceeds " +
                                          std::to_string(set.size()) + " records");
  const std::size_t nprobe = params.nprobe == 0 ? default_nprobe(nlist) : params.nprobe;
  ANNBENCH_CHECK(nprobe >= 1 && nprobe <= nlist, "ivf_build: nprobe must be in [1, nlist]");

  IvfIndex index;
  index.encoding_ = params.encoding;
  index.nprobe_ = nprobe;
  index.count_ = set.size();
  index.coarse_ = kmeans_fit(set.data(), set.dim(), nlist, derive_seed(seed, 0));
  index.coarse_.history.clear();
  if (params.encoding == IvfEncoding::Pq) {
    const std::size_t m = params.pq.m == 0 ? default_pq_m(set.dim()) : params.pq.m;
    index.pq_ = pq_train(set.data(), set.dim(), m, params.pq.nbits, derive_seed(seed, 1));
    for (auto& s : index.pq_.subspaces) s.history.clear();
  } else if (params.encoding == IvfEncoding::Sq) {
    index.sq_ = sq_train(set.data(), set.dim());
  }

  index.lists_.resize(nlist);
  for (std::size_t r = 0; r < set.size(); ++r) {
    const auto v = set.vector(r);
    auto& list = index.lists_[index.coarse_.nearest(v)];
    list.ids.push_back(set.id(r));
    switch (params.encoding) {
      case IvfEncoding::Flat: list.vectors.insert(list.vectors.end(), v.begin(), v.end()); break;
      case IvfEncoding::Pq: {
        const auto code = pq_encode(index.pq_, v);
        list.codes.insert(list.codes.end(), code.begin(), code.end());
        break;
      }
      case IvfEncoding::Sq: {
        const auto code = sq_encode(index.sq_, v);
        list.codes.insert(list.codes.end(), code.begin(), code.end());
        break;
      }
    }
  }
  return index;
}

Family IvfIndex::family() const {
  switch (encoding_) {
    case IvfEncoding::Flat: return Family::IvfFlat;
    case IvfEncoding::Pq: return Family::IvfPq;
    case IvfEncoding::Sq: return Family::IvfSq;
  }
  return Family::IvfFlat;
}

std::vector<std::size_t> IvfIndex::probe_order(std::span<const float> query, std::size_t nprobe) const {
  ANNBENCH_CHECK(query.size() == coarse_.dim, "ivf_search: query dimension mismatch");
  ANNBENCH_CHECK(nprobe >= 1 && nprobe <= coarse_.k,
                 "ivf_search: nprobe=" + std::to_string(nprobe) + " outside [1, " + std::to_string(coarse_.k) + "]");
  std::vector<double> dist(coarse_.k);
  for (std::size_t c = 0; c < coarse_.k; ++c)
    dist[c] = detail::squared_l2(query.data(), coarse_.row(c).data(), coarse_.dim);
  std::vector<std::size_t> order(coarse_.k);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(nprobe), order.end(),
                    [&](std::size_t a, std::size_t b) { return dist[a] != dist[b] ? dist[a] < dist[b] : a < b; });
  order.resize(nprobe);
  return order;
}

std::vector<Id> IvfIndex::candidate_ids(std::span<const float> query, std::size_t nprobe) const {
  std::vector<Id> out;
  for (std::size_t l : probe_order(query, nprobe)) out.insert(out.end(), lists_[l].ids.begin(), lists_[l].ids.end());
  return out;
}

SearchResult IvfIndex::search(std::span<const float> query, std::size_t k, std::optional<Id> exclude) const {
  return search(query, k, nprobe_, exclude);
}

SearchResult IvfIndex::search(std::span<const float> query, std::size_t k, std::size_t nprobe,
                              std::optional<Id> exclude) const {
  ANNBENCH_CHECK(k >= 1, "k must be at least 1");
  const auto probes = probe_order(query, nprobe);
  const std::size_t dim = coarse_.dim;
  std::optional<AdcTable> adc;
  if (encoding_ == IvfEncoding::Pq) adc.emplace(pq_, query);

  std::vector<Neighbor> candidates;
  for (std::size_t l : probes) {
    const auto& list = lists_[l];
    for (std::size_t i = 0; i < list.ids.size(); ++i) {
      if (exclude && list.ids[i] == *exclude) continue;
      float score = 0.0f;
      switch (encoding_) {
        case IvfEncoding::Flat:
          score = distance(Metric::L2, query, std::span<const float>(list.vectors.data() + i * dim, dim));
          break;
        case IvfEncoding::Pq:
          score = adc->score(std::span<const std::uint8_t>(list.codes.data() + i * pq_.m, pq_.m));
          break;
        case IvfEncoding::Sq:
          score = distance(Metric::L2, query,
                           sq_decode(sq_, std::span<const std::uint8_t>(list.codes.data() + i * dim, dim)));
          break;
      }
      candidates.push_back({list.ids[i], score});
    }
  }
  return take_top_k(std::move(candidates), k, false);
}

std::optional<std::vector<float>> IvfIndex::stored_vector(Id id) const {
  if (encoding_ != IvfEncoding::Flat) return std::nullopt;
  for (const auto& list : lists_) {
    for (std::size_t i = 0; i < list.ids.size(); ++i) {
      if (list.ids[i] != id) continue;
      const auto* p = list.vectors.data() + i * coarse_.dim;
      return std::vector<float>(p, p + coarse_.dim);
    }
  }
  return std::nullopt;
}

std::size_t IvfIndex::memory_bytes() const {
  std::size_t bytes = coarse_.vectors.size() * sizeof(float);
  if (encoding_ == IvfEncoding::Pq) bytes += pq_.memory_bytes();
  if (encoding_ == IvfEncoding::Sq) bytes += 2 * sq_.dim() * sizeof(float);
  for (const auto& list : lists_)
    bytes += list.ids.size() * sizeof(Id) + list.vectors.size() * sizeof(float) + list.codes.size();
  return bytes;
}

// u32 nprobe, u64 count, coarse centroids, [PQ codebook | SQ params], then per
// list: u64 n, n x u64 id, payload.
void IvfIndex::save_payload(ByteWriter& out) const {
  out.put<std::uint32_t>(static_cast<std::uint32_t>(nprobe_));
  out.put<std::uint64_t>(count_);
  coarse_.save(out);
  if (encoding_ == IvfEncoding::Pq) pq_.save(out);
  if (encoding_ == IvfEncoding::Sq) sq_.save(out);
  for (const auto& list : lists_) {
    out.put<std::uint64_t>(list.ids.size());
    out.put_array<Id>(list.ids);
    if (encoding_ == IvfEncoding::Flat)
      out.put_array<float>(list.vectors);
    else
      out.put_array<std::uint8_t>(list.codes);
  }
}

IvfIndex IvfIndex::load(Family family, ByteReader& in) {
  IvfIndex index;
  switch (family) {
    case Family::IvfFlat: index.encoding_ = IvfEncoding::Flat; break;
    case Family::IvfPq: index.encoding_ = IvfEncoding::Pq; break;
    case Family::IvfSq: index.encoding_ = IvfEncoding::Sq; break;
    default: throw Error("not an IVF family");
  }
  index.nprobe_ = in.get<std::uint32_t>();
  index.count_ = in.get<std::uint64_t>();
  index.coarse_ = Centroids::load(in);
  ANNBENCH_CHECK(index.nprobe_ >= 1 && index.nprobe_ <= index.coarse_.k, "corrupt IVF nprobe");
  if (index.encoding_ == IvfEncoding::Pq) index.pq_ = PqCodebook::load(in);
  if (index.encoding_ == IvfEncoding::Sq) index.sq_ = SqParams::load(in);
  const std::size_t dim = index.coarse_.dim;
  const std::size_t stride = index.encoding_ == IvfEncoding::Pq ? index.pq_.m : dim;
  std::size_t total = 0;
  index.lists_.resize(index.coarse_.k);
  for (auto& list : index.lists_) {
    const auto n = in.get<std::uint64_t>();
    list.ids = in.get_array<Id>(n);
    ANNBENCH_CHECK(n <= in.remaining() / stride, "truncated IVF list");
    if (index.encoding_ == IvfEncoding::Flat)
      list.vectors = in.get_array<float>(n * dim);
    else
      list.codes = in.get_array<std::uint8_t>(n * stride);
    total += n;
  }
  ANNBENCH_CHECK(total == index.count_, "corrupt IVF: list sizes do not sum to count");
  return index;
}

std::string IvfIndex::describe() const {
  std::string s = "nlist=" + std::to_string(coarse_.k) + ",nprobe=" + std::to_string(nprobe_);
  if (encoding_ == IvfEncoding::Pq) s += ",m=" + std::to_string(pq_.m) + ",nbits=" + std::to_string(pq_.nbits);
  return s;
}

}  // namespace annbench

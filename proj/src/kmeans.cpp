#include "annbench/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "annbench/error.hpp"
#include "annbench/metric.hpp"

namespace annbench {
namespace {

double squared_l2_mixed(const float* x, const double* c, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    const double diff = static_cast<double>(x[d]) - c[d];
    acc += diff * diff;
  }
  return acc;
}

struct Assignment {
  std::vector<std::size_t> cluster;
  std::vector<double> sq_dist;
  double total = 0.0;
};

void assign(std::span<const float> data, std::size_t dim, std::size_t n, const std::vector<double>& centers,
            std::size_t k, Assignment& out) {
  out.cluster.resize(n);
  out.sq_dist.resize(n);
  out.total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const float* x = data.data() + i * dim;
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      const double d = squared_l2_mixed(x, centers.data() + c * dim, dim);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    out.cluster[i] = best;
    out.sq_dist[i] = best_d;
    out.total += best_d;
  }
}

std::vector<double> kmeanspp_init(std::span<const float> data, std::size_t dim, std::size_t n, std::size_t k,
                                  std::mt19937_64& rng) {
  std::vector<double> centers(k * dim);
  auto set_center = [&](std::size_t c, std::size_t point) {
    for (std::size_t d = 0; d < dim; ++d) centers[c * dim + d] = data[point * dim + d];
  };

  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  set_center(0, pick(rng));
  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = squared_l2_mixed(data.data() + i * dim, centers.data(), dim);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double d : nearest) total += d;
    std::size_t chosen = 0;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      chosen = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (nearest[i] == 0.0) continue;
        acc += nearest[i];
        chosen = i;
        if (acc > target) break;
      }
    } else {
      // Every point coincides with a chosen center; duplicates are unavoidable.
      chosen = pick(rng);
    }
    set_center(c, chosen);
    const double* cc = centers.data() + c * dim;
    for (std::size_t i = 0; i < n; ++i)
      nearest[i] = std::min(nearest[i], squared_l2_mixed(data.data() + i * dim, cc, dim));
  }
  return centers;
}

}  // namespace

std::size_t Centroids::nearest(std::span<const float> v) const {
  ANNBENCH_CHECK(v.size() == dim, "centroid lookup: dimension mismatch");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < k; ++c) {
    const double d = detail::squared_l2(v.data(), vectors.data() + c * dim, dim);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

void Centroids::save(ByteWriter& out) const {
  out.put<std::uint32_t>(static_cast<std::uint32_t>(k));
  out.put<std::uint32_t>(static_cast<std::uint32_t>(dim));
  out.put<double>(distortion);
  out.put_array<float>(vectors);
}

Centroids Centroids::load(ByteReader& in) {
  Centroids c;
  c.k = in.get<std::uint32_t>();
  c.dim = in.get<std::uint32_t>();
  c.distortion = in.get<double>();
  ANNBENCH_CHECK(c.k > 0 && c.dim > 0, "centroids: zero size");
  c.vectors = in.get_array<float>(c.k * c.dim);
  return c;
}

Centroids kmeans_fit(std::span<const float> data, std::size_t dim, std::size_t k, std::uint64_t seed,
                     const KMeansOptions& options) {
  ANNBENCH_CHECK(dim > 0 && !data.empty() && data.size() % dim == 0,
                 "kmeans: data must be a non-empty multiple of dim");
  const std::size_t n = data.size() / dim;
  ANNBENCH_CHECK(k >= 1, "kmeans: k must be positive");
  ANNBENCH_CHECK(k <= n, "kmeans: k=" + std::to_string(k) + " exceeds " + std::to_string(n) + " points");

  std::mt19937_64 rng(seed);
  std::vector<double> centers = kmeanspp_init(data, dim, n, k, rng);

  Centroids result;
  result.k = k;
  result.dim = dim;

  Assignment a;
  std::vector<double> sums(k * dim);
  std::vector<std::size_t> counts(k);
  for (std::size_t iter = 0; iter < options.max_iters; ++iter) {
    assign(data, dim, n, centers, k, a);
    const double distortion = a.total / static_cast<double>(n);
    // Lloyd steps never increase distortion; the slack only absorbs summation-order rounding.
    if (!result.history.empty() && distortion > result.history.back() * (1.0 + 1e-9) + 1e-300)
      throw Error("kmeans: distortion increased from " + std::to_string(result.history.back()) + " to " +
                  std::to_string(distortion));
    result.history.push_back(distortion);

    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = a.cluster[i];
      ++counts[c];
      for (std::size_t d = 0; d < dim; ++d) sums[c * dim + d] += data[i * dim + d];
    }

    // Points already used to repair an empty cluster this round.
    std::vector<std::size_t> taken;
    double max_shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      double* cc = centers.data() + c * dim;
      if (counts[c] == 0) {
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (a.sq_dist[i] > far_d && std::find(taken.begin(), taken.end(), i) == taken.end()) {
            far_d = a.sq_dist[i];
            far = i;
          }
        }
        taken.push_back(far);
        double shift = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
          const double next = data[far * dim + d];
          shift += (next - cc[d]) * (next - cc[d]);
          cc[d] = next;
        }
        max_shift = std::max(max_shift, std::sqrt(shift));
        continue;
      }
      double shift = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        const double next = sums[c * dim + d] / static_cast<double>(counts[c]);
        shift += (next - cc[d]) * (next - cc[d]);
        cc[d] = next;
      }
      max_shift = std::max(max_shift, std::sqrt(shift));
    }
    if (max_shift < options.tolerance) break;
  }

  result.vectors.resize(k * dim);
  for (std::size_t i = 0; i < k * dim; ++i) {
    result.vectors[i] = static_cast<float>(centers[i]);
    ANNBENCH_CHECK(std::isfinite(result.vectors[i]), "kmeans: non-finite centroid");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = data.subspan(i * dim, dim);
    total += detail::squared_l2(v.data(), result.row(result.nearest(v)).data(), dim);
  }
  result.distortion = total / static_cast<double>(n);
  return result;
}

}  // namespace annbench

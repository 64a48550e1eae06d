#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "annbench/binary_io.hpp"

namespace annbench {

struct Centroids {
  std::size_t k = 0;
  std::size_t dim = 0;
  std::vector<float> vectors;  // k x dim, row-major
  // Mean squared L2 distance of the training points to their nearest centroid.
  double distortion = 0.0;
  // Distortion measured at each Lloyd assignment step. Training only, not persisted.
  std::vector<double> history;

  std::span<const float> row(std::size_t c) const { return {vectors.data() + c * dim, dim}; }
  /// Index of the nearest centroid under L2; ties go to the lowest index.
  std::size_t nearest(std::span<const float> v) const;

  void save(ByteWriter& out) const;
  static Centroids load(ByteReader& in);
};

struct KMeansOptions {
  std::size_t max_iters = 25;
  double tolerance = 1e-6;  // stop once no centroid moves farther than this
};

/// k-means++ seeding followed by Lloyd iterations over row-major `data`.
/// Empty clusters are re-seeded with the point farthest from its centroid.
/// Throws if k is zero or exceeds the number of points, or if distortion ever
/// increases between iterations.
Centroids kmeans_fit(std::span<const float> data, std::size_t dim, std::size_t k,
                     std::uint64_t seed, const KMeansOptions& options = {});

}  // namespace annbench

#include "annbench/metric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "annbench/error.hpp"

namespace annbench {

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::L2: return "euclidean";
    case Metric::InnerProduct: return "ip";
    case Metric::Angular: return "angular";
    case Metric::Manhattan: return "manhattan";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  if (name == "euclidean" || name == "l2") return Metric::L2;
  if (name == "ip" || name == "dot" || name == "inner_product") return Metric::InnerProduct;
  if (name == "angular" || name == "cosine") return Metric::Angular;
  if (name == "manhattan" || name == "l1") return Metric::Manhattan;
  throw Error("unknown metric: " + std::string(name));
}

float distance(Metric m, std::span<const float> a, std::span<const float> b) {
  ANNBENCH_CHECK(a.size() == b.size(), "distance: dimension mismatch (" + std::to_string(a.size()) +
                                           " vs " + std::to_string(b.size()) + ")");
  const std::size_t n = a.size();
  switch (m) {
    case Metric::L2:
      return static_cast<float>(std::sqrt(detail::squared_l2(a.data(), b.data(), n)));
    case Metric::InnerProduct:
      return static_cast<float>(detail::dot(a.data(), b.data(), n));
    case Metric::Manhattan: {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        acc += std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i]));
      return static_cast<float>(acc);
    }
    case Metric::Angular: {
      const double na = detail::dot(a.data(), a.data(), n);
      const double nb = detail::dot(b.data(), b.data(), n);
      ANNBENCH_CHECK(na > 0.0 && nb > 0.0, "angular distance undefined for a zero vector");
      const double cosine = std::clamp(detail::dot(a.data(), b.data(), n) / std::sqrt(na * nb), -1.0, 1.0);
      return static_cast<float>(std::sqrt(std::max(0.0, 2.0 * (1.0 - cosine))));
    }
  }
  throw Error("distance: unknown metric");
}

std::vector<float> normalize(std::span<const float> v) {
  const double norm = std::sqrt(detail::dot(v.data(), v.data(), v.size()));
  ANNBENCH_CHECK(norm > 0.0, "normalize: zero vector");
  std::vector<float> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<float>(v[i] / norm);
  return out;
}

}  // namespace annbench

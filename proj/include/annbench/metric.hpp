#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace annbench {

using Id = std::uint64_t;
using Label = std::uint32_t;

// InnerProduct is a similarity (higher is closer) and is not a metric.
// The other three are symmetric, non-negative distances.
enum class Metric : std::uint8_t { L2 = 0, InnerProduct = 1, Angular = 2, Manhattan = 3 };

std::string_view metric_name(Metric m);
Metric parse_metric(std::string_view name);

inline bool higher_is_better(Metric m) { return m == Metric::InnerProduct; }

/// Score of `b` relative to `a` under `m`. Accumulates in double, returns float.
/// Angular is sqrt(2 * (1 - cos)) with cos clamped to [-1, 1].
/// Throws on dimension mismatch and on a zero vector under Angular.
float distance(Metric m, std::span<const float> a, std::span<const float> b);

/// Unit-L2 copy of `v`. Throws on a zero vector.
std::vector<float> normalize(std::span<const float> v);

namespace detail {

// Unchecked kernels shared by the hot loops. Callers guarantee equal lengths.
inline double squared_l2(const float* a, const float* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc += d * d;
  }
  return acc;
}

inline double dot(const float* a, const float* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return acc;
}

}  // namespace detail

}  // namespace annbench

#include "annbench/sq.hpp"

#include <algorithm>
#include <cmath>

#include "annbench/error.hpp"

namespace annbench {

void SqParams::save(ByteWriter& out) const {
  out.put<std::uint32_t>(static_cast<std::uint32_t>(dim()));
  out.put_array<float>(min);
  out.put_array<float>(max);
}

SqParams SqParams::load(ByteReader& in) {
  SqParams p;
  const auto dim = in.get<std::uint32_t>();
  p.min = in.get_array<float>(dim);
  p.max = in.get_array<float>(dim);
  for (std::size_t d = 0; d < dim; ++d) ANNBENCH_CHECK(p.min[d] <= p.max[d], "corrupt SQ range");
  return p;
}

SqParams sq_train(std::span<const float> data, std::size_t dim) {
  ANNBENCH_CHECK(dim > 0 && !data.empty() && data.size() % dim == 0, "sq_train: empty or ragged data");
  SqParams p{{data.begin(), data.begin() + static_cast<std::ptrdiff_t>(dim)},
             {data.begin(), data.begin() + static_cast<std::ptrdiff_t>(dim)}};
  for (std::size_t i = dim; i < data.size(); ++i) {
    const std::size_t d = i % dim;
    p.min[d] = std::min(p.min[d], data[i]);
    p.max[d] = std::max(p.max[d], data[i]);
  }
  return p;
}

std::vector<std::uint8_t> sq_encode(const SqParams& p, std::span<const float> v) {
  ANNBENCH_CHECK(v.size() == p.dim(), "sq_encode: dimension mismatch");
  std::vector<std::uint8_t> out(v.size());
  for (std::size_t d = 0; d < v.size(); ++d) {
    const double span = static_cast<double>(p.max[d]) - p.min[d];
    if (span <= 0.0) {
      out[d] = 0;
      continue;
    }
    const double level = std::floor((static_cast<double>(v[d]) - p.min[d]) * 256.0 / span);
    out[d] = static_cast<std::uint8_t>(std::clamp(level, 0.0, 255.0));
  }
  return out;
}

std::vector<float> sq_decode(const SqParams& p, std::span<const std::uint8_t> bytes) {
  ANNBENCH_CHECK(bytes.size() == p.dim(), "sq_decode: dimension mismatch");
  std::vector<float> out(bytes.size());
  for (std::size_t d = 0; d < bytes.size(); ++d) {
    const double span = static_cast<double>(p.max[d]) - p.min[d];
    out[d] = span <= 0.0 ? p.min[d] : static_cast<float>(p.min[d] + (bytes[d] + 0.5) * span / 256.0);
  }
  return out;
}

}  // namespace annbench

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "annbench/binary_io.hpp"

namespace annbench {

// Per-dimension [min, max] learned from training data; 8-bit levels.
struct SqParams {
  std::vector<float> min;
  std::vector<float> max;

  std::size_t dim() const { return min.size(); }
  void save(ByteWriter& out) const;
  static SqParams load(ByteReader& in);
};

SqParams sq_train(std::span<const float> data, std::size_t dim);

/// Level = floor((v - min) * 256 / span) clamped to [0, 255], i.e. the level
/// whose mid-point reconstruction is nearest to v.
std::vector<std::uint8_t> sq_encode(const SqParams& p, std::span<const float> v);
/// Level L decodes to min + (L + 0.5) * span / 256; a zero span decodes to min.
std::vector<float> sq_decode(const SqParams& p, std::span<const std::uint8_t> bytes);

}  // namespace annbench

#pragma once

#include <cstdint>
#include <optional>

#include "tctv/tensor.hpp"
#include "tctv/transform.hpp"

namespace tctv {

/// Recipe for a joint low-rank + piecewise-smooth ground-truth tensor: every
/// frontal slice is split into `regions` nearest-neighbor cells with one
/// N(0,1) value each, then the tensor is truncated to t-SVD rank `rank`.
struct SynthSpec {
  Shape dims;
  std::int64_t rank = 1;
  std::int64_t regions = 25;
  TransformChoice transform;
  std::uint64_t seed = 0;

  void validate() const;
};

DenseTensor gen_lowrank_smooth(const SynthSpec& spec);

// Independent Bernoulli(p) per entry.
BoolTensor gen_mask(const Shape& dims, double p, std::uint64_t seed);

/// Sparse corruption: exactly m entries at a uniformly random support, each
/// +1 or -1 equiprobably. Either the cardinality or the ratio must be set.
struct CorruptionSpec {
  std::optional<std::int64_t> cardinality;
  std::optional<double> ratio;
  std::uint64_t seed = 0;

  std::int64_t resolve_cardinality(const Shape& dims) const;
};

DenseTensor gen_sparse_corruption(const CorruptionSpec& spec, const Shape& dims);

}  // namespace tctv

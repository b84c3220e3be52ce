#include "tctv/synthesis.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "tctv/rng.hpp"
#include "tctv/tsvd.hpp"

namespace tctv {

void SynthSpec::validate() const {
  if (dims.order() < 3)
    throw std::invalid_argument("SynthSpec: tensor order must be >= 3, got " + dims.str());
  const std::int64_t cells = dims.dim(0) * dims.dim(1);
  if (regions < 1 || regions > cells / 4)
    throw std::invalid_argument("SynthSpec: regions must be in [1, n0*n1/4]");
  if (rank < 1 || rank > std::min(dims.dim(0), dims.dim(1)))
    throw std::invalid_argument("SynthSpec: rank must be in [1, min(n0,n1)]");
}

DenseTensor gen_lowrank_smooth(const SynthSpec& spec) {
  spec.validate();
  const std::int64_t n0 = spec.dims.dim(0);
  const std::int64_t n1 = spec.dims.dim(1);
  const std::int64_t cells = n0 * n1;
  const std::int64_t p = spec.dims.trailing_size();

  DenseTensor t = DenseTensor::zeros(spec.dims, ScalarKind::Real);
  std::vector<std::int64_t> pool(static_cast<std::size_t>(cells));
  for (std::int64_t s = 0; s < p; ++s) {
    auto rng = make_rng(derive_seed(spec.seed, 0x736c6963, static_cast<std::uint64_t>(s)));
    // Distinct seed cells via a partial Fisher-Yates pass.
    std::iota(pool.begin(), pool.end(), std::int64_t{0});
    for (std::int64_t i = 0; i < spec.regions; ++i) {
      std::uniform_int_distribution<std::int64_t> pick(i, cells - 1);
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> region_value(static_cast<std::size_t>(spec.regions));
    for (auto& v : region_value) v = gauss(rng);

    auto slice = face_map(t, s);
    for (std::int64_t c = 0; c < n1; ++c) {
      for (std::int64_t r = 0; r < n0; ++r) {
        std::int64_t best = 0;
        std::int64_t best_d2 = std::numeric_limits<std::int64_t>::max();
        for (std::int64_t q = 0; q < spec.regions; ++q) {
          const std::int64_t sr = pool[static_cast<std::size_t>(q)] % n0;
          const std::int64_t sc = pool[static_cast<std::size_t>(q)] / n0;
          const std::int64_t d2 = (r - sr) * (r - sr) + (c - sc) * (c - sc);
          if (d2 < best_d2) {  // ties resolve to the lowest seed index
            best_d2 = d2;
            best = q;
          }
        }
        slice(r, c) = region_value[static_cast<std::size_t>(best)];
      }
    }
  }

  const TransformSpec tspec = TransformSpec::for_shape(spec.transform, spec.dims);
  return truncate_rank_k(tsvd(t, tspec, /*skinny=*/true), spec.rank);
}

BoolTensor gen_mask(const Shape& dims, double p, std::uint64_t seed) {
  if (!(p > 0.0) || p > 1.0)
    throw std::invalid_argument("gen_mask: sampling rate must be in (0, 1]");
  BoolTensor mask = BoolTensor::full(dims, false);
  auto rng = make_rng(derive_seed(seed, 0x6d61736b));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (auto& b : mask.data) b = unif(rng) < p ? 1 : 0;
  return mask;
}

std::int64_t CorruptionSpec::resolve_cardinality(const Shape& dims) const {
  if (cardinality.has_value() == ratio.has_value())
    throw std::invalid_argument(
        "CorruptionSpec: exactly one of cardinality or ratio must be set");
  std::int64_t m;
  if (cardinality)
    m = *cardinality;
  else {
    if (*ratio < 0.0 || *ratio > 1.0)
      throw std::invalid_argument("CorruptionSpec: ratio must be in [0, 1]");
    m = std::llround(*ratio * static_cast<double>(dims.size()));
  }
  if (m < 0 || m > dims.size())
    throw std::invalid_argument("CorruptionSpec: cardinality out of range [0, " +
                                std::to_string(dims.size()) + "]");
  return m;
}

DenseTensor gen_sparse_corruption(const CorruptionSpec& spec, const Shape& dims) {
  const std::int64_t m = spec.resolve_cardinality(dims);
  DenseTensor e = DenseTensor::zeros(dims, ScalarKind::Real);
  if (m == 0) return e;
  auto rng = make_rng(derive_seed(spec.seed, 0x636f7272));
  std::vector<std::int64_t> pool(static_cast<std::size_t>(dims.size()));
  std::iota(pool.begin(), pool.end(), std::int64_t{0});
  std::bernoulli_distribution coin(0.5);
  auto& data = e.real();
  for (std::int64_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::int64_t> pick(i, dims.size() - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
    data[static_cast<std::size_t>(pool[static_cast<std::size_t>(i)])] = coin(rng) ? 1.0 : -1.0;
  }
  return e;
}

}  // namespace tctv

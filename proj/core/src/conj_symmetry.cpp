#include "conj_symmetry.hpp"

namespace tctv {

std::vector<ConjOrbit> conj_orbits(const std::vector<std::int64_t>& trailing_dims) {
  std::int64_t total = 1;
  for (std::int64_t n : trailing_dims) total *= n;
  std::vector<ConjOrbit> orbits;
  orbits.reserve(static_cast<std::size_t>((total + 1) / 2 + 1));
  std::vector<std::int64_t> idx(trailing_dims.size());
  for (std::int64_t flat = 0; flat < total; ++flat) {
    std::int64_t rem = flat;
    std::int64_t mirror = 0;
    std::int64_t stride = 1;
    for (std::size_t k = 0; k < trailing_dims.size(); ++k) {
      const std::int64_t n = trailing_dims[k];
      const std::int64_t j = rem % n;
      rem /= n;
      mirror += ((n - j) % n) * stride;
      stride *= n;
    }
    if (flat <= mirror) orbits.push_back({flat, mirror});
  }
  return orbits;
}

}  // namespace tctv

#pragma once

#include <cstdint>
#include <vector>

namespace tctv {

// After a DFT along the trailing modes of a real tensor, face slice j and its
// frequency mirror (n-j mod n per mode) are complex conjugates. Grouping
// slices into such orbits lets per-slice work run on roughly half the slices,
// with the partner filled in by conjugation.
struct ConjOrbit {
  std::int64_t rep;      // processed slice (flat trailing index)
  std::int64_t partner;  // mirrored slice; == rep for self-conjugate slices
};

std::vector<ConjOrbit> conj_orbits(const std::vector<std::int64_t>& trailing_dims);

}  // namespace tctv

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tctv {

// Dense multi-index geometry. Linearization is mode-0 fastest (the
// column-major generalization): the flat offset of (i_0,...,i_{d-1}) is
// sum_k i_k * stride(k) with stride(0) = 1 and stride(k) = n_0*...*n_{k-1}.
// Modes are 0-based throughout the C++ API; the CLI speaks 1-based modes.
class Shape {
public:
  Shape() = default;
  explicit Shape(std::vector<std::int64_t> dims);

  int order() const { return static_cast<int>(dims_.size()); }
  std::int64_t dim(int mode) const { return dims_.at(static_cast<std::size_t>(mode)); }
  const std::vector<std::int64_t>& dims() const { return dims_; }
  std::int64_t size() const { return size_; }
  std::int64_t stride(int mode) const { return strides_.at(static_cast<std::size_t>(mode)); }

  // n_0 * n_1, the size of one face slice.
  std::int64_t face_size() const;
  // Product of dims over modes >= 2 (1 when order < 3). Face slice s lives at
  // flat offset s * face_size(): slices are contiguous in this layout.
  std::int64_t trailing_size() const;
  std::vector<std::int64_t> trailing_dims() const;

  std::int64_t flat(std::span<const std::int64_t> idx) const;
  std::vector<std::int64_t> unflat(std::int64_t offset) const;
  // Flat index over modes >= 2 only (mode 2 fastest).
  std::int64_t trailing_flat(std::span<const std::int64_t> trailing_idx) const;

  bool operator==(const Shape& other) const { return dims_ == other.dims_; }
  std::string str() const;

private:
  std::vector<std::int64_t> dims_;
  std::vector<std::int64_t> strides_;
  std::int64_t size_ = 0;
};

}  // namespace tctv

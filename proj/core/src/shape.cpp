#include "tctv/shape.hpp"

#include <sstream>
#include <stdexcept>

namespace tctv {

Shape::Shape(std::vector<std::int64_t> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("Shape: empty dimension list");
  strides_.resize(dims_.size());
  size_ = 1;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (dims_[k] <= 0) throw std::invalid_argument("Shape: dims must be positive, got " + str());
    strides_[k] = size_;
    size_ *= dims_[k];
  }
}

std::int64_t Shape::face_size() const {
  if (order() < 2) return size_;
  return dims_[0] * dims_[1];
}

std::int64_t Shape::trailing_size() const {
  std::int64_t p = 1;
  for (int k = 2; k < order(); ++k) p *= dims_[static_cast<std::size_t>(k)];
  return p;
}

std::vector<std::int64_t> Shape::trailing_dims() const {
  if (order() <= 2) return {};
  return std::vector<std::int64_t>(dims_.begin() + 2, dims_.end());
}

std::int64_t Shape::flat(std::span<const std::int64_t> idx) const {
  if (static_cast<int>(idx.size()) != order())
    throw std::invalid_argument("Shape::flat: index order mismatch");
  std::int64_t off = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= dims_[k])
      throw std::out_of_range("Shape::flat: index out of bounds at mode " + std::to_string(k));
    off += idx[k] * strides_[k];
  }
  return off;
}

std::vector<std::int64_t> Shape::unflat(std::int64_t offset) const {
  if (offset < 0 || offset >= size_) throw std::out_of_range("Shape::unflat: offset out of range");
  std::vector<std::int64_t> idx(dims_.size());
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    idx[k] = offset % dims_[k];
    offset /= dims_[k];
  }
  return idx;
}

std::int64_t Shape::trailing_flat(std::span<const std::int64_t> trailing_idx) const {
  if (static_cast<int>(trailing_idx.size()) != order() - 2)
    throw std::invalid_argument("Shape::trailing_flat: index order mismatch");
  std::int64_t off = 0;
  std::int64_t stride = 1;
  for (std::size_t k = 0; k < trailing_idx.size(); ++k) {
    const std::int64_t n = dims_[k + 2];
    if (trailing_idx[k] < 0 || trailing_idx[k] >= n)
      throw std::out_of_range("Shape::trailing_flat: index out of bounds at mode " +
                              std::to_string(k + 2));
    off += trailing_idx[k] * stride;
    stride *= n;
  }
  return off;
}

std::string Shape::str() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (k) os << "x";
    os << dims_[k];
  }
  return os.str();
}

}  // namespace tctv

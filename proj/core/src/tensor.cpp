#include "tctv/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tctv {

namespace {

void check_same_shape(const DenseTensor& a, const DenseTensor& b, const char* op) {
  if (!(a.shape() == b.shape()))
    throw std::invalid_argument(std::string(op) + ": shape mismatch " + a.shape().str() + " vs " +
                                b.shape().str());
}

void check_same_kind(const DenseTensor& a, const DenseTensor& b, const char* op) {
  if (a.kind() != b.kind())
    throw std::invalid_argument(std::string(op) + ": scalar kind mismatch");
}

template <typename T>
Eigen::Map<const Eigen::VectorX<T>> vec(const std::vector<T>& v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}
template <typename T>
Eigen::Map<Eigen::VectorX<T>> vec(std::vector<T>& v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

}  // namespace

DenseTensor DenseTensor::zeros(Shape shape, ScalarKind kind) {
  DenseTensor t;
  t.shape_ = std::move(shape);
  t.kind_ = kind;
  if (kind == ScalarKind::Real)
    t.real_.assign(static_cast<std::size_t>(t.shape_.size()), 0.0);
  else
    t.cplx_.assign(static_cast<std::size_t>(t.shape_.size()), cxd{0.0, 0.0});
  return t;
}

DenseTensor DenseTensor::from_real(Shape shape, std::vector<double> data) {
  if (static_cast<std::int64_t>(data.size()) != shape.size())
    throw std::invalid_argument("DenseTensor: buffer length does not match shape " + shape.str());
  DenseTensor t;
  t.shape_ = std::move(shape);
  t.kind_ = ScalarKind::Real;
  t.real_ = std::move(data);
  return t;
}

DenseTensor DenseTensor::from_complex(Shape shape, std::vector<cxd> data) {
  if (static_cast<std::int64_t>(data.size()) != shape.size())
    throw std::invalid_argument("DenseTensor: buffer length does not match shape " + shape.str());
  DenseTensor t;
  t.shape_ = std::move(shape);
  t.kind_ = ScalarKind::Complex;
  t.cplx_ = std::move(data);
  return t;
}

std::vector<double>& DenseTensor::real() {
  if (kind_ != ScalarKind::Real) throw std::logic_error("DenseTensor: not a real tensor");
  return real_;
}
const std::vector<double>& DenseTensor::real() const {
  if (kind_ != ScalarKind::Real) throw std::logic_error("DenseTensor: not a real tensor");
  return real_;
}
std::vector<cxd>& DenseTensor::cplx() {
  if (kind_ != ScalarKind::Complex) throw std::logic_error("DenseTensor: not a complex tensor");
  return cplx_;
}
const std::vector<cxd>& DenseTensor::cplx() const {
  if (kind_ != ScalarKind::Complex) throw std::logic_error("DenseTensor: not a complex tensor");
  return cplx_;
}

DenseTensor DenseTensor::to_complex() const {
  if (kind_ == ScalarKind::Complex) return *this;
  std::vector<cxd> out(real_.size());
  for (std::size_t i = 0; i < real_.size(); ++i) out[i] = cxd{real_[i], 0.0};
  return from_complex(shape_, std::move(out));
}

DenseTensor DenseTensor::to_real(double residue_tol) const {
  if (kind_ == ScalarKind::Real) return *this;
  double imag_sq = 0.0, total_sq = 0.0;
  for (const cxd& z : cplx_) {
    imag_sq += z.imag() * z.imag();
    total_sq += std::norm(z);
  }
  if (std::sqrt(imag_sq) > residue_tol * std::sqrt(total_sq) && imag_sq > 0.0)
    throw std::runtime_error("DenseTensor::to_real: imaginary residue " +
                             std::to_string(std::sqrt(imag_sq)) + " exceeds threshold");
  std::vector<double> out(cplx_.size());
  for (std::size_t i = 0; i < cplx_.size(); ++i) out[i] = cplx_[i].real();
  return from_real(shape_, std::move(out));
}

bool DenseTensor::all_finite() const {
  if (kind_ == ScalarKind::Real) {
    for (double x : real_)
      if (!std::isfinite(x)) return false;
  } else {
    for (const cxd& z : cplx_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

BoolTensor BoolTensor::full(Shape shape, bool value) {
  BoolTensor m;
  m.data.assign(static_cast<std::size_t>(shape.size()), value ? 1 : 0);
  m.shape = std::move(shape);
  return m;
}

std::int64_t BoolTensor::count_true() const {
  std::int64_t n = 0;
  for (std::uint8_t b : data) n += (b != 0);
  return n;
}

DenseTensor add(const DenseTensor& a, const DenseTensor& b) {
  DenseTensor out = a;
  add_in_place(out, b);
  return out;
}

DenseTensor sub(const DenseTensor& a, const DenseTensor& b) {
  DenseTensor out = a;
  sub_in_place(out, b);
  return out;
}

DenseTensor scale(const DenseTensor& a, double s) {
  DenseTensor out = a;
  if (out.is_real())
    vec(out.real()) *= s;
  else
    vec(out.cplx()) *= s;
  return out;
}

DenseTensor hadamard(const DenseTensor& a, const DenseTensor& b) {
  check_same_shape(a, b, "hadamard");
  check_same_kind(a, b, "hadamard");
  DenseTensor out = a;
  if (out.is_real())
    vec(out.real()).array() *= vec(b.real()).array();
  else
    vec(out.cplx()).array() *= vec(b.cplx()).array();
  return out;
}

void add_in_place(DenseTensor& a, const DenseTensor& b) {
  check_same_shape(a, b, "add");
  check_same_kind(a, b, "add");
  if (a.is_real())
    vec(a.real()) += vec(b.real());
  else
    vec(a.cplx()) += vec(b.cplx());
}

void sub_in_place(DenseTensor& a, const DenseTensor& b) {
  check_same_shape(a, b, "sub");
  check_same_kind(a, b, "sub");
  if (a.is_real())
    vec(a.real()) -= vec(b.real());
  else
    vec(a.cplx()) -= vec(b.cplx());
}

void axpy_in_place(DenseTensor& y, double alpha, const DenseTensor& x) {
  check_same_shape(y, x, "axpy");
  check_same_kind(y, x, "axpy");
  if (y.is_real())
    vec(y.real()) += alpha * vec(x.real());
  else
    vec(y.cplx()) += alpha * vec(x.cplx());
}

cxd inner(const DenseTensor& a, const DenseTensor& b) {
  check_same_shape(a, b, "inner");
  check_same_kind(a, b, "inner");
  if (a.is_real()) return cxd{vec(a.real()).dot(vec(b.real())), 0.0};
  // Eigen's dot conjugates the first argument; spec wants conjugation on the
  // second, so swap-and-conjugate.
  return std::conj(vec(b.cplx()).dot(vec(a.cplx())));
}

double frobenius_norm(const DenseTensor& t) {
  return t.is_real() ? vec(t.real()).norm() : vec(t.cplx()).norm();
}

double l1_norm(const DenseTensor& t) {
  return t.is_real() ? vec(t.real()).cwiseAbs().sum() : vec(t.cplx()).cwiseAbs().sum();
}

double max_abs(const DenseTensor& t) {
  if (t.size() == 0) return 0.0;
  return t.is_real() ? vec(t.real()).cwiseAbs().maxCoeff() : vec(t.cplx()).cwiseAbs().maxCoeff();
}

DenseTensor project(const DenseTensor& t, const BoolTensor& mask) {
  DenseTensor out = t;
  zero_where(out, mask, false);
  return out;
}

void zero_where(DenseTensor& t, const BoolTensor& mask, bool mask_value) {
  if (!(t.shape() == mask.shape))
    throw std::invalid_argument("mask projection: shape mismatch");
  const std::uint8_t target = mask_value ? 1 : 0;
  if (t.is_real()) {
    auto& d = t.real();
    for (std::size_t i = 0; i < d.size(); ++i)
      if (mask.data[i] == target) d[i] = 0.0;
  } else {
    auto& d = t.cplx();
    for (std::size_t i = 0; i < d.size(); ++i)
      if (mask.data[i] == target) d[i] = cxd{0.0, 0.0};
  }
}

namespace {

std::int64_t face_offset(const DenseTensor& t, std::span<const std::int64_t> trailing_idx) {
  if (t.shape().order() < 3)
    throw std::invalid_argument("face_slice: tensor order must be >= 3");
  return t.shape().trailing_flat(trailing_idx) * t.shape().face_size();
}

}  // namespace

Eigen::MatrixXd face_slice(const DenseTensor& t, std::span<const std::int64_t> trailing_idx) {
  const std::int64_t off = face_offset(t, trailing_idx);
  return Eigen::Map<const Eigen::MatrixXd>(t.real().data() + off, t.shape().dim(0),
                                           t.shape().dim(1));
}

Eigen::MatrixXcd face_slice_cx(const DenseTensor& t, std::span<const std::int64_t> trailing_idx) {
  const std::int64_t off = face_offset(t, trailing_idx);
  if (t.is_real())
    return Eigen::Map<const Eigen::MatrixXd>(t.real().data() + off, t.shape().dim(0),
                                             t.shape().dim(1))
        .cast<cxd>();
  return Eigen::Map<const Eigen::MatrixXcd>(t.cplx().data() + off, t.shape().dim(0),
                                            t.shape().dim(1));
}

Eigen::MatrixXd bdiag(const DenseTensor& t) {
  if (t.shape().order() < 3) throw std::invalid_argument("bdiag: tensor order must be >= 3");
  const std::int64_t p = t.shape().trailing_size();
  const std::int64_t n0 = t.shape().dim(0), n1 = t.shape().dim(1);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n0 * p, n1 * p);
  for (std::int64_t s = 0; s < p; ++s) out.block(s * n0, s * n1, n0, n1) = face_map(t, s);
  return out;
}

Eigen::MatrixXcd bdiag_cx(const DenseTensor& t) {
  if (t.shape().order() < 3) throw std::invalid_argument("bdiag: tensor order must be >= 3");
  const std::int64_t p = t.shape().trailing_size();
  const std::int64_t n0 = t.shape().dim(0), n1 = t.shape().dim(1);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n0 * p, n1 * p);
  for (std::int64_t s = 0; s < p; ++s) {
    if (t.is_real())
      out.block(s * n0, s * n1, n0, n1) = face_map(t, s).cast<cxd>();
    else
      out.block(s * n0, s * n1, n0, n1) = face_map_cx(t, s);
  }
  return out;
}

namespace {

// The tensor decomposes as a stack of inner x n_k matrices (inner = product
// of dims below `mode`); the mode-k product maps each such block B to B * m^T.
template <typename Scalar, typename Matrix>
std::vector<Scalar> mode_k_product_impl(const std::vector<Scalar>& data, const Shape& shape,
                                        const Matrix& m, int mode) {
  const std::int64_t nk = shape.dim(mode);
  const std::int64_t inner = shape.stride(mode);
  const std::int64_t outer = shape.size() / (inner * nk);
  const std::int64_t rows = m.rows();
  std::vector<Scalar> out(static_cast<std::size_t>(outer * inner * rows));
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const auto mt = m.transpose().eval();
  for (std::int64_t o = 0; o < outer; ++o) {
    Eigen::Map<const Mat> block(data.data() + o * inner * nk, inner, nk);
    Eigen::Map<Mat> dst(out.data() + o * inner * rows, inner, rows);
    dst.noalias() = block * mt.template cast<Scalar>();
  }
  return out;
}

Shape replace_dim(const Shape& shape, int mode, std::int64_t n) {
  auto dims = shape.dims();
  dims[static_cast<std::size_t>(mode)] = n;
  return Shape(dims);
}

void check_mode(const Shape& shape, int mode, const char* op) {
  if (mode < 0 || mode >= shape.order())
    throw std::invalid_argument(std::string(op) + ": mode out of range");
}

}  // namespace

DenseTensor mode_k_product(const DenseTensor& t, const Eigen::MatrixXd& m, int mode) {
  check_mode(t.shape(), mode, "mode_k_product");
  if (m.cols() != t.shape().dim(mode))
    throw std::invalid_argument("mode_k_product: matrix columns do not match mode dimension");
  const Shape out_shape = replace_dim(t.shape(), mode, m.rows());
  if (t.is_real())
    return DenseTensor::from_real(out_shape, mode_k_product_impl(t.real(), t.shape(), m, mode));
  return DenseTensor::from_complex(out_shape, mode_k_product_impl(t.cplx(), t.shape(), m, mode));
}

DenseTensor mode_k_product(const DenseTensor& t, const Eigen::MatrixXcd& m, int mode) {
  check_mode(t.shape(), mode, "mode_k_product");
  if (m.cols() != t.shape().dim(mode))
    throw std::invalid_argument("mode_k_product: matrix columns do not match mode dimension");
  const Shape out_shape = replace_dim(t.shape(), mode, m.rows());
  const DenseTensor tc = t.to_complex();
  return DenseTensor::from_complex(out_shape, mode_k_product_impl(tc.cplx(), tc.shape(), m, mode));
}

Eigen::MatrixXd unfold(const DenseTensor& t, int mode) {
  check_mode(t.shape(), mode, "unfold");
  const Shape& sh = t.shape();
  const std::int64_t nk = sh.dim(mode);
  const std::int64_t cols = sh.size() / nk;
  const std::int64_t inner = sh.stride(mode);
  const std::int64_t outer = sh.size() / (inner * nk);
  Eigen::MatrixXd out(nk, cols);
  const double* src = t.real().data();
  for (std::int64_t o = 0; o < outer; ++o)
    for (std::int64_t i = 0; i < nk; ++i)
      for (std::int64_t j = 0; j < inner; ++j)
        out(i, o * inner + j) = src[(o * nk + i) * inner + j];
  return out;
}

namespace {

template <typename Scalar>
std::vector<Scalar> take_front_impl(const std::vector<Scalar>& data, const Shape& shape, int mode,
                                    std::int64_t count) {
  const std::int64_t nk = shape.dim(mode);
  const std::int64_t inner = shape.stride(mode);
  const std::int64_t outer = shape.size() / (inner * nk);
  std::vector<Scalar> out(static_cast<std::size_t>(outer * inner * count));
  for (std::int64_t o = 0; o < outer; ++o)
    std::copy_n(data.begin() + o * inner * nk, inner * count, out.begin() + o * inner * count);
  return out;
}

}  // namespace

DenseTensor take_front(const DenseTensor& t, int mode, std::int64_t count) {
  check_mode(t.shape(), mode, "take_front");
  if (count < 1 || count > t.shape().dim(mode))
    throw std::invalid_argument("take_front: count out of range");
  const Shape out_shape = replace_dim(t.shape(), mode, count);
  if (t.is_real())
    return DenseTensor::from_real(out_shape, take_front_impl(t.real(), t.shape(), mode, count));
  return DenseTensor::from_complex(out_shape, take_front_impl(t.cplx(), t.shape(), mode, count));
}

DenseTensor fold(const Eigen::MatrixXd& m, const Shape& shape, int mode) {
  check_mode(shape, mode, "fold");
  const std::int64_t nk = shape.dim(mode);
  if (m.rows() != nk || m.cols() != shape.size() / nk)
    throw std::invalid_argument("fold: matrix size does not match target shape");
  const std::int64_t inner = shape.stride(mode);
  const std::int64_t outer = shape.size() / (inner * nk);
  std::vector<double> out(static_cast<std::size_t>(shape.size()));
  for (std::int64_t o = 0; o < outer; ++o)
    for (std::int64_t i = 0; i < nk; ++i)
      for (std::int64_t j = 0; j < inner; ++j)
        out[static_cast<std::size_t>((o * nk + i) * inner + j)] = m(i, o * inner + j);
  return DenseTensor::from_real(shape, std::move(out));
}

}  // namespace tctv

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "tctv/shape.hpp"

namespace tctv {

using cxd = std::complex<double>;

enum class ScalarKind : std::uint8_t { Real = 0, Complex = 1 };

/// Dense order-d tensor of f64 or c128 scalars in mode-0-fastest layout.
/// Tensors are plain values: ops never mutate their inputs, and a constructed
/// tensor is safe to share read-only across threads.
class DenseTensor {
public:
  DenseTensor() = default;

  static DenseTensor zeros(Shape shape, ScalarKind kind = ScalarKind::Real);
  static DenseTensor from_real(Shape shape, std::vector<double> data);
  static DenseTensor from_complex(Shape shape, std::vector<cxd> data);

  const Shape& shape() const { return shape_; }
  ScalarKind kind() const { return kind_; }
  bool is_real() const { return kind_ == ScalarKind::Real; }
  std::int64_t size() const { return shape_.size(); }

  std::vector<double>& real();
  const std::vector<double>& real() const;
  std::vector<cxd>& cplx();
  const std::vector<cxd>& cplx() const;

  DenseTensor to_complex() const;
  // Drops imaginary parts after verifying their magnitude is below
  // residue_tol * frobenius_norm (a larger residue signals a corrupted
  // transform-domain tensor and throws).
  DenseTensor to_real(double residue_tol = 1e-8) const;

  bool all_finite() const;

private:
  Shape shape_;
  ScalarKind kind_ = ScalarKind::Real;
  std::vector<double> real_;
  std::vector<cxd> cplx_;
};

/// Boolean observation mask over the same geometry as a DenseTensor.
struct BoolTensor {
  Shape shape;
  std::vector<std::uint8_t> data;

  static BoolTensor full(Shape shape, bool value);
  std::int64_t count_true() const;
};

// ---- elementwise algebra (shape- and kind-checked, value semantics) ----

DenseTensor add(const DenseTensor& a, const DenseTensor& b);
DenseTensor sub(const DenseTensor& a, const DenseTensor& b);
DenseTensor scale(const DenseTensor& a, double s);
DenseTensor hadamard(const DenseTensor& a, const DenseTensor& b);
void add_in_place(DenseTensor& a, const DenseTensor& b);
void sub_in_place(DenseTensor& a, const DenseTensor& b);
// y += alpha * x
void axpy_in_place(DenseTensor& y, double alpha, const DenseTensor& x);

// Conjugate-linear in the second argument for complex tensors.
cxd inner(const DenseTensor& a, const DenseTensor& b);
double frobenius_norm(const DenseTensor& t);
double l1_norm(const DenseTensor& t);
double max_abs(const DenseTensor& t);

// ---- mask projections ----

// Keeps entries where the mask is true, zeroes the rest.
DenseTensor project(const DenseTensor& t, const BoolTensor& mask);
void zero_where(DenseTensor& t, const BoolTensor& mask, bool mask_value);

// ---- face slices and matricizations ----

// T(:,:,i_2,...,i_{d-1}) as an n_0 x n_1 matrix; real kind only.
Eigen::MatrixXd face_slice(const DenseTensor& t, std::span<const std::int64_t> trailing_idx);
Eigen::MatrixXcd face_slice_cx(const DenseTensor& t, std::span<const std::int64_t> trailing_idx);

// Block-diagonal matrix of all face slices in lexicographic face order.
// Intended for oracles and small inputs; the result is dense.
Eigen::MatrixXd bdiag(const DenseTensor& t);
Eigen::MatrixXcd bdiag_cx(const DenseTensor& t);

// Mode-k product: every mode-k fiber is left-multiplied by m (m columns must
// match dim(mode)); the result replaces dim(mode) by m.rows().
DenseTensor mode_k_product(const DenseTensor& t, const Eigen::MatrixXd& m, int mode);
DenseTensor mode_k_product(const DenseTensor& t, const Eigen::MatrixXcd& m, int mode);

// Standard mode-k matricization, n_k x (prod of the other dims); columns run
// over the remaining modes with lower modes fastest. Real kind only.
Eigen::MatrixXd unfold(const DenseTensor& t, int mode);
DenseTensor fold(const Eigen::MatrixXd& m, const Shape& shape, int mode);

// Sub-tensor keeping indices [0, count) along one mode.
DenseTensor take_front(const DenseTensor& t, int mode, std::int64_t count);

// ---- contiguous views over face slices (layout guarantees contiguity) ----

inline Eigen::Map<const Eigen::MatrixXd> face_map(const DenseTensor& t, std::int64_t s) {
  const auto& sh = t.shape();
  return {t.real().data() + s * sh.face_size(), sh.dim(0), sh.order() > 1 ? sh.dim(1) : 1};
}
inline Eigen::Map<Eigen::MatrixXd> face_map(DenseTensor& t, std::int64_t s) {
  const auto& sh = t.shape();
  return {t.real().data() + s * sh.face_size(), sh.dim(0), sh.order() > 1 ? sh.dim(1) : 1};
}
inline Eigen::Map<const Eigen::MatrixXcd> face_map_cx(const DenseTensor& t, std::int64_t s) {
  const auto& sh = t.shape();
  return {t.cplx().data() + s * sh.face_size(), sh.dim(0), sh.order() > 1 ? sh.dim(1) : 1};
}
inline Eigen::Map<Eigen::MatrixXcd> face_map_cx(DenseTensor& t, std::int64_t s) {
  const auto& sh = t.shape();
  return {t.cplx().data() + s * sh.face_size(), sh.dim(0), sh.order() > 1 ? sh.dim(1) : 1};
}

}  // namespace tctv

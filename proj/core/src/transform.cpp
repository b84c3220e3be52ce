#include "tctv/transform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/QR>

#include "fft_backend.hpp"
#include "tctv/rng.hpp"

namespace tctv {

namespace {

constexpr double kConstructionTol = 1e-8;

Eigen::MatrixXd orthonormal_dct2(std::int64_t n) {
  Eigen::MatrixXd c(n, n);
  const double pi = std::numbers::pi;
  for (std::int64_t k = 0; k < n; ++k) {
    const double alpha = std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
    for (std::int64_t j = 0; j < n; ++j)
      c(k, j) = alpha * std::cos(pi * (2.0 * j + 1.0) * k / (2.0 * n));
  }
  return c;
}

Eigen::MatrixXd seeded_random_orthogonal(std::int64_t n, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd g(n, n);
  for (std::int64_t j = 0; j < n; ++j)
    for (std::int64_t i = 0; i < n; ++i) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  // Fix the sign ambiguity of QR so a seed pins the matrix exactly.
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (std::int64_t j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

void verify_mode_matrix(const Eigen::MatrixXd& u, double unit_scale) {
  const Eigen::MatrixXd gram = u.transpose() * u;
  const double err =
      (gram - unit_scale * Eigen::MatrixXd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (err > kConstructionTol * std::max(1.0, unit_scale))
    throw std::runtime_error("TransformSpec: mode matrix failed the scaled-isometry check");
}

}  // namespace

std::string to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::Dft: return "dft";
    case TransformKind::Dct: return "dct";
    case TransformKind::RandomOrthogonal: return "rot";
  }
  return "?";
}

TransformKind transform_kind_from_string(const std::string& name) {
  if (name == "dft") return TransformKind::Dft;
  if (name == "dct") return TransformKind::Dct;
  if (name == "rot") return TransformKind::RandomOrthogonal;
  throw std::invalid_argument("unknown transform kind: " + name + " (expected dft|dct|rot)");
}

TransformSpec TransformSpec::make(TransformKind kind, std::vector<std::int64_t> trailing_dims,
                                  std::uint64_t seed) {
  if (trailing_dims.empty())
    throw std::invalid_argument("TransformSpec: needs at least one trailing mode (order >= 3)");
  for (std::int64_t n : trailing_dims)
    if (n <= 0) throw std::invalid_argument("TransformSpec: trailing dims must be positive");

  TransformSpec spec;
  spec.kind_ = kind;
  spec.seed_ = seed;
  spec.trailing_dims_ = std::move(trailing_dims);
  spec.ell_ = 1.0;
  switch (kind) {
    case TransformKind::Dft:
      for (std::int64_t n : spec.trailing_dims_) spec.ell_ *= static_cast<double>(n);
      // Matrices are not cached: the DFT path runs on FFTs. dft_matrix()
      // materializes the dense form on demand for the reference route.
      break;
    case TransformKind::Dct:
      for (std::size_t j = 0; j < spec.trailing_dims_.size(); ++j) {
        spec.fwd_.push_back(orthonormal_dct2(spec.trailing_dims_[j]));
        verify_mode_matrix(spec.fwd_.back(), 1.0);
        spec.inv_.push_back(spec.fwd_.back().transpose());
      }
      break;
    case TransformKind::RandomOrthogonal:
      for (std::size_t j = 0; j < spec.trailing_dims_.size(); ++j) {
        spec.fwd_.push_back(seeded_random_orthogonal(spec.trailing_dims_[j],
                                                     derive_seed(seed, 0x524f54, j)));
        verify_mode_matrix(spec.fwd_.back(), 1.0);
        spec.inv_.push_back(spec.fwd_.back().transpose());
      }
      break;
  }
  return spec;
}

TransformSpec TransformSpec::make(const TransformChoice& choice,
                                  std::vector<std::int64_t> trailing_dims) {
  return make(choice.kind, std::move(trailing_dims), choice.seed);
}

TransformSpec TransformSpec::for_shape(const TransformChoice& choice, const Shape& shape) {
  if (shape.order() < 3)
    throw std::invalid_argument("TransformSpec: tensor order must be >= 3, got " + shape.str());
  return make(choice.kind, shape.trailing_dims(), choice.seed);
}

const Eigen::MatrixXd& TransformSpec::mode_matrix(int trailing_mode) const {
  if (kind_ == TransformKind::Dft)
    throw std::logic_error("TransformSpec: the DFT has no cached real mode matrix");
  return fwd_.at(static_cast<std::size_t>(trailing_mode));
}

const Eigen::MatrixXd& TransformSpec::mode_matrix_inverse(int trailing_mode) const {
  if (kind_ == TransformKind::Dft)
    throw std::logic_error("TransformSpec: the DFT has no cached real mode matrix");
  return inv_.at(static_cast<std::size_t>(trailing_mode));
}

Eigen::MatrixXcd TransformSpec::dft_matrix(int trailing_mode) const {
  const std::int64_t n = trailing_dims_.at(static_cast<std::size_t>(trailing_mode));
  Eigen::MatrixXcd f(n, n);
  const double w = -2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::int64_t j = 0; j < n; ++j)
    for (std::int64_t k = 0; k < n; ++k)
      f(j, k) = std::polar(1.0, w * static_cast<double>((j * k) % n));
  return f;
}

bool TransformSpec::matches(const Shape& shape) const {
  return shape.order() >= 3 && shape.trailing_dims() == trailing_dims_;
}

void TransformSpec::require_match(const Shape& shape) const {
  if (!matches(shape))
    throw std::invalid_argument("TransformSpec: trailing dims do not match tensor shape " +
                                shape.str());
}

namespace {

DenseTensor apply_dense(const DenseTensor& t, const TransformSpec& spec, bool inverse_direction) {
  DenseTensor out = t;
  const int d = t.shape().order();
  for (int mode = 2; mode < d; ++mode) {
    const auto& m = inverse_direction ? spec.mode_matrix_inverse(mode - 2)
                                      : spec.mode_matrix(mode - 2);
    out = mode_k_product(out, m, mode);
  }
  return out;
}

}  // namespace

DenseTensor forward(const DenseTensor& t, const TransformSpec& spec) {
  spec.require_match(t.shape());
  if (spec.kind() == TransformKind::Dft) {
    DenseTensor out = t.to_complex();
    fft::trailing(out.cplx().data(), out.shape().dims(), -1);
    return out;
  }
  return apply_dense(t, spec, /*inverse_direction=*/false);
}

DenseTensor inverse(const DenseTensor& t, const TransformSpec& spec, bool original_was_real) {
  spec.require_match(t.shape());
  if (spec.kind() == TransformKind::Dft) {
    if (t.is_real())
      throw std::invalid_argument("inverse: DFT transform-domain tensor must be complex");
    DenseTensor out = t;
    fft::trailing(out.cplx().data(), out.shape().dims(), +1);
    double scale = 1.0;
    for (std::int64_t n : spec.trailing_dims()) scale *= static_cast<double>(n);
    for (cxd& z : out.cplx()) z /= scale;
    return original_was_real ? out.to_real() : out;
  }
  DenseTensor out = apply_dense(t, spec, /*inverse_direction=*/true);
  if (original_was_real && !out.is_real()) out = out.to_real();
  return out;
}

double scale_factor(const TransformSpec& spec) { return spec.scale_factor(); }

DenseTensor forward_dense_reference(const DenseTensor& t, const TransformSpec& spec) {
  spec.require_match(t.shape());
  if (spec.kind() != TransformKind::Dft) return apply_dense(t, spec, false);
  DenseTensor out = t.to_complex();
  const int d = t.shape().order();
  for (int mode = 2; mode < d; ++mode)
    out = mode_k_product(out, spec.dft_matrix(mode - 2), mode);
  return out;
}

}  // namespace tctv

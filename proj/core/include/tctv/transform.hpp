#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tctv/tensor.hpp"

namespace tctv {

enum class TransformKind : std::uint8_t { Dft = 0, Dct = 1, RandomOrthogonal = 2 };

std::string to_string(TransformKind kind);
TransformKind transform_kind_from_string(const std::string& name);

/// CLI-level transform selection, not yet bound to tensor dimensions.
struct TransformChoice {
  TransformKind kind = TransformKind::Dft;
  std::uint64_t seed = 0;  // random-orthogonal only
};

/// Invertible linear transform applied along every mode >= 2, with its scale
/// factor ell: ell = prod of trailing dims for DFT, 1 for DCT and random
/// orthogonal. One kind serves all trailing modes; the per-mode matrices are
/// cached at construction and the spec is immutable afterwards.
class TransformSpec {
public:
  static TransformSpec make(TransformKind kind, std::vector<std::int64_t> trailing_dims,
                            std::uint64_t seed = 0);
  static TransformSpec make(const TransformChoice& choice,
                            std::vector<std::int64_t> trailing_dims);
  // Convenience: bind to the trailing dims of an existing shape.
  static TransformSpec for_shape(const TransformChoice& choice, const Shape& shape);

  TransformKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<std::int64_t>& trailing_dims() const { return trailing_dims_; }
  double scale_factor() const { return ell_; }
  bool complex_domain() const { return kind_ == TransformKind::Dft; }

  // Per-mode transform matrix (trailing mode index 0 <-> tensor mode 2).
  // DCT / random orthogonal only; the DFT path is FFT-based.
  const Eigen::MatrixXd& mode_matrix(int trailing_mode) const;
  const Eigen::MatrixXd& mode_matrix_inverse(int trailing_mode) const;
  // Dense DFT matrix for a trailing mode (reference path and oracles).
  Eigen::MatrixXcd dft_matrix(int trailing_mode) const;

  bool matches(const Shape& shape) const;
  void require_match(const Shape& shape) const;

private:
  TransformKind kind_ = TransformKind::Dft;
  std::uint64_t seed_ = 0;
  std::vector<std::int64_t> trailing_dims_;
  double ell_ = 1.0;
  std::vector<Eigen::MatrixXd> fwd_;
  std::vector<Eigen::MatrixXd> inv_;
};

// Transform-domain mapping: mode-k products with the spec's matrices for
// every mode >= 2 (FFT along each trailing mode for DFT). DFT output is
// complex; DCT / random orthogonal preserve the input kind.
DenseTensor forward(const DenseTensor& t, const TransformSpec& spec);

// Exact inverse of forward. When original_was_real, the imaginary residue is
// checked against 1e-8 * ||t||_F and dropped.
DenseTensor inverse(const DenseTensor& t, const TransformSpec& spec, bool original_was_real = true);

double scale_factor(const TransformSpec& spec);

// Reference forward path via dense per-mode matrix products (always complex
// for DFT). The FFT path must agree with this to 1e-10; used by tests and
// kept here so the two routes stay independently exercised.
DenseTensor forward_dense_reference(const DenseTensor& t, const TransformSpec& spec);

}  // namespace tctv

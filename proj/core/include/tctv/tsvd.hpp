#pragma once

#include <cstdint>
#include <vector>

#include "tctv/tensor.hpp"
#include "tctv/transform.hpp"

namespace tctv {

// Default relative tolerance under which a singular tube counts as nonzero.
inline constexpr double kRankTol = 1e-6;

/// Factors of T = u * s * v^T under the given transform: s is f-diagonal with
/// nonincreasing nonnegative diagonals per transform-domain slice, u and v
/// are orthogonal in the t-product sense. Skinny factors carry
/// r = min(n_0, n_1) lateral slices.
struct TSvdFactors {
  DenseTensor u;  // n_0 x r x trailing
  DenseTensor s;  // r x r (skinny) / n_0 x n_1 (full)
  DenseTensor v;  // n_1 x r x trailing
  TransformSpec spec;
  bool skinny = true;

  std::int64_t tube_count() const { return std::min(s.shape().dim(0), s.shape().dim(1)); }
};

// Facewise matrix product in the transform domain: a is n_0 x l x trailing,
// b is l x n_1 x trailing with identical trailing dims.
DenseTensor t_product(const DenseTensor& a, const DenseTensor& b, const TransformSpec& spec);

// Conjugate-transpose of every transform-domain face slice; an involution.
DenseTensor t_transpose(const DenseTensor& t, const TransformSpec& spec);

// Tensor whose every transform-domain face slice is I_n.
DenseTensor identity_tensor(std::int64_t n, const std::vector<std::int64_t>& trailing_dims,
                            const TransformSpec& spec);

bool is_f_diagonal(const DenseTensor& t, const TransformSpec& spec, double tol = 1e-10);

TSvdFactors tsvd(const DenseTensor& t, const TransformSpec& spec, bool skinny = true);

DenseTensor reconstruct(const TSvdFactors& factors);

// Best t-SVD rank-k approximation from precomputed factors, 1 <= k <= r.
DenseTensor truncate_rank_k(const TSvdFactors& factors, std::int64_t k);

// Max magnitude of each singular tube across transform-domain slices,
// nonincreasing in the tube index.
std::vector<double> singular_tube_sup(const DenseTensor& t, const TransformSpec& spec);

// Number of tubes whose sup exceeds tol * (largest singular value overall).
std::int64_t tsvd_rank(const DenseTensor& t, const TransformSpec& spec, double tol = kRankTol);

// Tensor nuclear norm: (1/ell) * sum of slice nuclear norms in the transform
// domain; equals (1/ell) * || bdiag of the transformed tensor ||_*.
double tnn(const DenseTensor& t, const TransformSpec& spec);

// Singular value thresholding: shrinks every transform-domain singular value
// by tau; the proximal operator of tau * tnn.
DenseTensor tsvt(const DenseTensor& t, double tau, const TransformSpec& spec);

// All-slices route without the conjugate-symmetry shortcut (DFT); the default
// path must agree with this to 1e-9. Exposed for verification.
DenseTensor tsvt_reference(const DenseTensor& t, double tau, const TransformSpec& spec);

}  // namespace tctv

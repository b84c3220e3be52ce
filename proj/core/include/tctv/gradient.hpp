#pragma once

#include <cstdint>
#include <vector>

#include "tctv/tensor.hpp"
#include "tctv/transform.hpp"

namespace tctv {

/// Ordered set of modes (0-based) along which the data is assumed smooth;
/// e.g. {0,1} for the spatial modes of an image.
class SmoothnessSet {
public:
  static SmoothnessSet make(std::vector<int> modes, int tensor_order);
  const std::vector<int>& modes() const { return modes_; }
  int size() const { return static_cast<int>(modes_.size()); }

private:
  std::vector<int> modes_;
};

enum class TvVariant { Anisotropic /*TV-1*/, Isotropic /*TV-2*/ };

// Circular forward difference along one mode: the mode-k product with the
// row-circulant matrix whose rows are (-1, 1, 0, ..., 0). Real tensors.
DenseTensor grad(const DenseTensor& t, int mode);

// Adjoint of grad: inner(grad(t,k), g) == inner(t, grad_adjoint(g,k)).
DenseTensor grad_adjoint(const DenseTensor& g, int mode);

double tv_norm(const DenseTensor& t, const SmoothnessSet& gamma, TvVariant variant);

// Mean TNN of the gradient tensors over the smoothness set: the single
// regularizer coupling low-rankness with smoothness.
double tctv_norm(const DenseTensor& t, const SmoothnessSet& gamma, const TransformSpec& spec);

/// Spectral data of (I + sum_k grad_adjoint . grad) under the d-dimensional
/// DFT: per-mode circulant eigenvalues lambda_j = -1 + exp(-2*pi*i*j/n) and
/// the broadcast denominator field W = 1 + sum |lambda|^2 >= 1. Built once
/// per run and reused every iteration.
struct DiffEigenvalues {
  Shape shape;
  std::vector<int> modes;
  std::vector<std::vector<cxd>> lambda;  // one vector per mode in `modes`
  std::vector<double> denom;             // W over the full shape
};

DiffEigenvalues make_diff_eigenvalues(const Shape& shape, const SmoothnessSet& gamma);

// Solves (I + sum_{k in gamma} grad_adjoint_k grad_k)(X) = rhs exactly via
// d-dimensional FFT and elementwise division by W.
DenseTensor solve_identity_plus_laplacian(const DenseTensor& rhs, const DiffEigenvalues& eig);

/// Gradient-tensor incoherence diagnostic. `mu` is the smallest parameter
/// making all three condition families hold for every mode in gamma;
/// `sampling_bound` is the constant-free sampling-rate expression
/// mu * R * log^2(n_max * ell) / (n_min * ell).
struct IncoherenceReport {
  double mu = 0;
  double mu_standard = 0;  // row/column basis-energy conditions
  double mu_joint = 0;     // max-entry condition on u * v^T
  double sampling_bound = 0;
  std::int64_t rank = 0;  // t-SVD rank of the diagnosed tensor
};

IncoherenceReport incoherence_mu(const DenseTensor& t, const SmoothnessSet& gamma,
                                 const TransformSpec& spec);

}  // namespace tctv

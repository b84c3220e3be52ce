#pragma once

#include <cstdint>

#include "tctv/tensor.hpp"
#include "tctv/transform.hpp"
#include "tctv/tsvd.hpp"

namespace tctv {

// Support tolerance used when counting the nonzeros of an estimated sparse
// component.
inline constexpr double kSparsitySupportTol = 1e-3;

struct MetricReport {
  double rel_err = 0;
  double psnr = 0;  // +inf when the inputs are identical
  double mssim = 0;
  double ergas = 0;
  std::int64_t estimated_rank = 0;
  std::int64_t estimated_sparsity = 0;  // entries of (x - ref) above the support tolerance
};

// ||x - ref||_F / ||ref||_F; the reference must be nonzero.
double rel_err(const DenseTensor& x, const DenseTensor& ref);

// 10 log10(peak^2 / MSE); +inf for identical inputs.
double psnr(const DenseTensor& x, const DenseTensor& ref, double peak = 1.0);

// Mean SSIM over all trailing-mode 2-D slices: 11x11 Gaussian window,
// sigma 1.5, K1 = 0.01, K2 = 0.03, dynamic range 1 (data in [0,1]). The
// window shrinks to fit slices smaller than 11x11.
double ssim_mean(const DenseTensor& x, const DenseTensor& ref);

// 100 * sqrt(mean over bands of (RMSE_b / mean_b)^2), band = trailing-mode
// slice, resolution ratio 1.
double ergas(const DenseTensor& x, const DenseTensor& ref);

std::int64_t estimate_rank(const DenseTensor& x, const TransformSpec& spec,
                           double tol = kRankTol);
std::int64_t estimate_sparsity(const DenseTensor& e, double tol = kSparsitySupportTol);

MetricReport compute_metrics(const DenseTensor& x, const DenseTensor& ref,
                             const TransformSpec& spec, double peak = 1.0);

}  // namespace tctv

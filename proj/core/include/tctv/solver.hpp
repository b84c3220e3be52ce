#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tctv/gradient.hpp"
#include "tctv/tensor.hpp"
#include "tctv/transform.hpp"

namespace tctv {

// Rank-estimation tolerance applied to recovered tensors in reports. Looser
// than the algebraic default: an iterate converged to ~1e-6 relative error
// carries residual tubes just above 1e-6 * sigma_max.
inline constexpr double kRecoveredRankTol = 1e-3;

enum class SolverKind : std::uint8_t { Tctv = 0, Tnn = 1 };
std::string to_string(SolverKind kind);
SolverKind solver_kind_from_string(const std::string& name);

struct AdmmConfig {
  double mu0 = 1e-4;     // initial penalty
  double rho = 1.1;      // penalty growth per iteration, > 1
  double mu_max = 1e10;  // penalty cap
  int max_iters = 500;
  double tol = 1e-7;  // stop when residuals or the relative change fall below
  std::vector<int> gamma_modes = {0, 1};  // 0-based smoothness set
  TransformChoice transform;
  std::optional<double> lambda;  // TRPCA weight; default 1/sqrt(n_max * ell)
  // Shrinks the sparse component by 1/(lambda*mu) instead of lambda/mu.
  bool e_shrink_reciprocal = false;
  // Attach the gradient-incoherence diagnostic when ground truth is given.
  bool compute_incoherence = true;

  void validate() const;
};

struct RecoveryReport {
  DenseTensor recovered;
  std::optional<DenseTensor> sparse;  // TRPCA corruption estimate
  std::string solver;
  std::string transform;
  double scale_factor = 0;  // ell of the bound transform
  int iterations = 0;
  bool converged = false;
  double final_residual = 0;
  // Max relative constraint residual after each iteration.
  std::vector<double> residual_trace;
  std::int64_t estimated_rank = 0;
  std::optional<std::int64_t> estimated_sparsity;
  std::optional<double> rel_err;  // vs supplied ground truth
  std::optional<double> rel_err_sparse;
  std::optional<double> lambda_used;  // TRPCA
  double wall_seconds = 0;
  std::optional<IncoherenceReport> incoherence;
};

// Entrywise sign(x) * max(|x| - tau, 0), the proximal operator of tau*|.|_1.
DenseTensor soft_threshold(const DenseTensor& t, double tau);

// Tensor completion, min t-CTV(T) s.t. T matches the observation on the
// mask. `observed` entries off the mask are ignored. The result matches the
// observation on the mask exactly.
RecoveryReport complete_tctv(const DenseTensor& observed, const BoolTensor& mask,
                             const AdmmConfig& cfg, const DenseTensor* ground_truth = nullptr);

// Robust decomposition observed = T + E, min t-CTV(T) + lambda*|E|_1.
RecoveryReport rpca_tctv(const DenseTensor& observed, const AdmmConfig& cfg,
                         const DenseTensor* truth_t = nullptr,
                         const DenseTensor* truth_e = nullptr);

// Baseline variants regularizing the tensor nuclear norm of T itself
// (no gradient splitting); same stopping machinery.
RecoveryReport complete_tnn(const DenseTensor& observed, const BoolTensor& mask,
                            const AdmmConfig& cfg, const DenseTensor* ground_truth = nullptr);
RecoveryReport rpca_tnn(const DenseTensor& observed, const AdmmConfig& cfg,
                        const DenseTensor* truth_t = nullptr,
                        const DenseTensor* truth_e = nullptr);

double default_trpca_lambda(const Shape& shape, const TransformSpec& spec);

}  // namespace tctv

#include "tctv/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "tctv/metrics.hpp"
#include "tctv/tsvd.hpp"

namespace tctv {

std::string to_string(SolverKind kind) {
  return kind == SolverKind::Tctv ? "tctv" : "tnn";
}

SolverKind solver_kind_from_string(const std::string& name) {
  if (name == "tctv") return SolverKind::Tctv;
  if (name == "tnn") return SolverKind::Tnn;
  throw std::invalid_argument("unknown solver: " + name + " (expected tctv|tnn)");
}

void AdmmConfig::validate() const {
  if (!(mu0 > 0)) throw std::invalid_argument("AdmmConfig: mu0 must be positive");
  if (!(rho > 1.0)) throw std::invalid_argument("AdmmConfig: rho must exceed 1");
  if (!(mu_max >= mu0)) throw std::invalid_argument("AdmmConfig: mu_max must be >= mu0");
  if (max_iters < 1) throw std::invalid_argument("AdmmConfig: max_iters must be >= 1");
  if (!(tol > 0)) throw std::invalid_argument("AdmmConfig: tol must be positive");
  if (lambda && !(*lambda > 0)) throw std::invalid_argument("AdmmConfig: lambda must be positive");
}

DenseTensor soft_threshold(const DenseTensor& t, double tau) {
  if (tau < 0) throw std::invalid_argument("soft_threshold: tau must be >= 0");
  if (!t.is_real()) throw std::invalid_argument("soft_threshold: real tensors only");
  DenseTensor out = t;
  for (double& v : out.real()) v = std::copysign(std::max(std::abs(v) - tau, 0.0), v);
  return out;
}

double default_trpca_lambda(const Shape& shape, const TransformSpec& spec) {
  const double n_max = static_cast<double>(std::max(shape.dim(0), shape.dim(1)));
  return 1.0 / std::sqrt(n_max * spec.scale_factor());
}

namespace {

constexpr double kTiny = 1e-300;

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void require_finite(const DenseTensor& t, const char* what) {
  if (!t.all_finite())
    throw std::invalid_argument(std::string(what) + " contains non-finite values");
}

// Shared iteration bookkeeping: residual trace, stopping rule, penalty growth.
struct AdmmLoop {
  const AdmmConfig& cfg;
  double mu;
  std::vector<double> trace;
  bool converged = false;
  int iterations = 0;

  explicit AdmmLoop(const AdmmConfig& c) : cfg(c), mu(c.mu0) { trace.reserve(64); }

  // Returns true when the loop should stop after this iteration. A
  // relative-change exit additionally requires loose feasibility: while the
  // penalty is small the splitting variables are inert and T can sit exactly
  // still at an infeasible point (with zero initialization, iterations 1 and
  // 2 coincide identically), so T-stationarity alone proves nothing.
  bool step(double residual, double relative_change) {
    if (!std::isfinite(residual))
      throw std::runtime_error("ADMM diverged: non-finite constraint residual");
    trace.push_back(residual);
    ++iterations;
    const bool feasible_enough = residual < 1e3 * cfg.tol;
    if (residual < cfg.tol || (relative_change < cfg.tol && feasible_enough)) {
      converged = true;
      return true;
    }
    mu = std::min(mu * cfg.rho, cfg.mu_max);
    return false;
  }
};

void finish_report(RecoveryReport& rep, const AdmmLoop& loop, const AdmmConfig& cfg,
                   const TransformSpec& spec, const SmoothnessSet& gamma,
                   const DenseTensor* truth, const DenseTensor* truth_sparse,
                   const Stopwatch& watch) {
  rep.transform = to_string(cfg.transform.kind);
  rep.scale_factor = spec.scale_factor();
  rep.iterations = loop.iterations;
  rep.converged = loop.converged;
  rep.residual_trace = loop.trace;
  rep.final_residual = loop.trace.empty() ? 0.0 : loop.trace.back();
  rep.estimated_rank = tsvd_rank(rep.recovered, spec, kRecoveredRankTol);
  if (rep.sparse) rep.estimated_sparsity = estimate_sparsity(*rep.sparse, kSparsitySupportTol);
  if (truth && frobenius_norm(*truth) > 0) rep.rel_err = rel_err(rep.recovered, *truth);
  if (truth_sparse && rep.sparse && frobenius_norm(*truth_sparse) > 0)
    rep.rel_err_sparse = rel_err(*rep.sparse, *truth_sparse);
  if (truth && cfg.compute_incoherence && frobenius_norm(*truth) > 0)
    rep.incoherence = incoherence_mu(*truth, gamma, spec);
  rep.wall_seconds = watch.seconds();
}

}  // namespace

RecoveryReport complete_tctv(const DenseTensor& observed, const BoolTensor& mask,
                             const AdmmConfig& cfg, const DenseTensor* ground_truth) {
  Stopwatch watch;
  cfg.validate();
  require_finite(observed, "observation");
  if (!(observed.shape() == mask.shape))
    throw std::invalid_argument("complete_tctv: mask shape mismatch");
  if (mask.count_true() == 0) throw std::invalid_argument("complete_tctv: empty mask");

  const Shape& shape = observed.shape();
  const TransformSpec spec = TransformSpec::for_shape(cfg.transform, shape);
  const SmoothnessSet gamma = SmoothnessSet::make(cfg.gamma_modes, shape.order());
  const DiffEigenvalues eig = make_diff_eigenvalues(shape, gamma);
  const int nmodes = gamma.size();
  const double inv_gamma = 1.0 / static_cast<double>(nmodes);

  const DenseTensor obs = project(observed, mask);
  const double norm_obs = std::max(frobenius_norm(obs), kTiny);

  DenseTensor t = obs;
  std::vector<DenseTensor> g(static_cast<std::size_t>(nmodes));
  std::vector<DenseTensor> lagr(static_cast<std::size_t>(nmodes));
  for (int k = 0; k < nmodes; ++k) {
    g[static_cast<std::size_t>(k)] = grad(obs, gamma.modes()[static_cast<std::size_t>(k)]);
    lagr[static_cast<std::size_t>(k)] = DenseTensor::zeros(shape);
  }
  DenseTensor comp = DenseTensor::zeros(shape);  // K, supported off the mask
  DenseTensor upsilon = DenseTensor::zeros(shape);

  AdmmLoop loop(cfg);
  std::vector<DenseTensor> gt(static_cast<std::size_t>(nmodes));
  while (loop.iterations < cfg.max_iters) {
    const double mu = loop.mu;
    // T step: one FFT-diagonalized linear solve.
    DenseTensor rhs = sub(obs, comp);
    axpy_in_place(rhs, 1.0 / mu, upsilon);
    for (int k = 0; k < nmodes; ++k) {
      DenseTensor gk = g[static_cast<std::size_t>(k)];
      axpy_in_place(gk, -1.0 / mu, lagr[static_cast<std::size_t>(k)]);
      add_in_place(rhs, grad_adjoint(gk, gamma.modes()[static_cast<std::size_t>(k)]));
    }
    DenseTensor t_next = solve_identity_plus_laplacian(rhs, eig);

    // Gradient-variable steps: one t-SVT per smoothness mode.
    for (int k = 0; k < nmodes; ++k) {
      gt[static_cast<std::size_t>(k)] = grad(t_next, gamma.modes()[static_cast<std::size_t>(k)]);
      DenseTensor target = gt[static_cast<std::size_t>(k)];
      axpy_in_place(target, 1.0 / mu, lagr[static_cast<std::size_t>(k)]);
      g[static_cast<std::size_t>(k)] = tsvt(target, inv_gamma / mu, spec);
    }

    // Compensator step, constrained to vanish on the mask.
    comp = sub(obs, t_next);
    axpy_in_place(comp, 1.0 / mu, upsilon);
    zero_where(comp, mask, true);

    // Residuals at the new iterates, then the multiplier ascent.
    double residual = 0.0;
    for (int k = 0; k < nmodes; ++k) {
      DenseTensor diff = sub(gt[static_cast<std::size_t>(k)], g[static_cast<std::size_t>(k)]);
      residual = std::max(residual, frobenius_norm(diff) / norm_obs);
      axpy_in_place(lagr[static_cast<std::size_t>(k)], mu, diff);
    }
    DenseTensor fit = sub(sub(obs, t_next), comp);
    residual = std::max(residual, frobenius_norm(fit) / norm_obs);
    axpy_in_place(upsilon, mu, fit);

    const double change = frobenius_norm(sub(t_next, t)) / std::max(frobenius_norm(t), kTiny);
    t = std::move(t_next);
    if (loop.step(residual, change)) break;
  }

  // Feasibility at exit: observed entries pass through exactly.
  RecoveryReport rep;
  rep.solver = "tctv-tc";
  rep.recovered = t;
  zero_where(rep.recovered, mask, true);
  add_in_place(rep.recovered, obs);
  finish_report(rep, loop, cfg, spec, gamma, ground_truth, nullptr, watch);
  return rep;
}

RecoveryReport rpca_tctv(const DenseTensor& observed, const AdmmConfig& cfg,
                         const DenseTensor* truth_t, const DenseTensor* truth_e) {
  Stopwatch watch;
  cfg.validate();
  require_finite(observed, "observation");

  const Shape& shape = observed.shape();
  const TransformSpec spec = TransformSpec::for_shape(cfg.transform, shape);
  const SmoothnessSet gamma = SmoothnessSet::make(cfg.gamma_modes, shape.order());
  const DiffEigenvalues eig = make_diff_eigenvalues(shape, gamma);
  const int nmodes = gamma.size();
  const double inv_gamma = 1.0 / static_cast<double>(nmodes);
  const double lambda = cfg.lambda.value_or(default_trpca_lambda(shape, spec));

  const double norm_obs = std::max(frobenius_norm(observed), kTiny);

  DenseTensor t = DenseTensor::zeros(shape);
  std::vector<DenseTensor> g(static_cast<std::size_t>(nmodes), DenseTensor::zeros(shape));
  std::vector<DenseTensor> lagr(static_cast<std::size_t>(nmodes), DenseTensor::zeros(shape));
  DenseTensor sparse = DenseTensor::zeros(shape);
  DenseTensor upsilon = DenseTensor::zeros(shape);

  AdmmLoop loop(cfg);
  std::vector<DenseTensor> gt(static_cast<std::size_t>(nmodes));
  while (loop.iterations < cfg.max_iters) {
    const double mu = loop.mu;
    DenseTensor rhs = sub(observed, sparse);
    axpy_in_place(rhs, 1.0 / mu, upsilon);
    for (int k = 0; k < nmodes; ++k) {
      DenseTensor gk = g[static_cast<std::size_t>(k)];
      axpy_in_place(gk, -1.0 / mu, lagr[static_cast<std::size_t>(k)]);
      add_in_place(rhs, grad_adjoint(gk, gamma.modes()[static_cast<std::size_t>(k)]));
    }
    DenseTensor t_next = solve_identity_plus_laplacian(rhs, eig);

    for (int k = 0; k < nmodes; ++k) {
      gt[static_cast<std::size_t>(k)] = grad(t_next, gamma.modes()[static_cast<std::size_t>(k)]);
      DenseTensor target = gt[static_cast<std::size_t>(k)];
      axpy_in_place(target, 1.0 / mu, lagr[static_cast<std::size_t>(k)]);
      g[static_cast<std::size_t>(k)] = tsvt(target, inv_gamma / mu, spec);
    }

    DenseTensor residual_dir = sub(observed, t_next);
    axpy_in_place(residual_dir, 1.0 / mu, upsilon);
    const double shrink = cfg.e_shrink_reciprocal ? 1.0 / (lambda * mu) : lambda / mu;
    sparse = soft_threshold(residual_dir, shrink);

    double residual = 0.0;
    for (int k = 0; k < nmodes; ++k) {
      DenseTensor diff = sub(gt[static_cast<std::size_t>(k)], g[static_cast<std::size_t>(k)]);
      residual = std::max(residual, frobenius_norm(diff) / norm_obs);
      axpy_in_place(lagr[static_cast<std::size_t>(k)], mu, diff);
    }
    DenseTensor fit = sub(sub(observed, t_next), sparse);
    residual = std::max(residual, frobenius_norm(fit) / norm_obs);
    axpy_in_place(upsilon, mu, fit);

    const double change = frobenius_norm(sub(t_next, t)) / std::max(frobenius_norm(t), kTiny);
    t = std::move(t_next);
    if (loop.step(residual, change)) break;
  }

  RecoveryReport rep;
  rep.solver = "tctv-trpca";
  rep.recovered = std::move(t);
  rep.sparse = std::move(sparse);
  rep.lambda_used = lambda;
  finish_report(rep, loop, cfg, spec, gamma, truth_t, truth_e, watch);
  return rep;
}

RecoveryReport complete_tnn(const DenseTensor& observed, const BoolTensor& mask,
                            const AdmmConfig& cfg, const DenseTensor* ground_truth) {
  Stopwatch watch;
  cfg.validate();
  require_finite(observed, "observation");
  if (!(observed.shape() == mask.shape))
    throw std::invalid_argument("complete_tnn: mask shape mismatch");
  if (mask.count_true() == 0) throw std::invalid_argument("complete_tnn: empty mask");

  const Shape& shape = observed.shape();
  const TransformSpec spec = TransformSpec::for_shape(cfg.transform, shape);
  const SmoothnessSet gamma = SmoothnessSet::make(cfg.gamma_modes, shape.order());

  const DenseTensor obs = project(observed, mask);
  const double norm_obs = std::max(frobenius_norm(obs), kTiny);

  DenseTensor t = obs;
  DenseTensor comp = DenseTensor::zeros(shape);
  DenseTensor upsilon = DenseTensor::zeros(shape);

  AdmmLoop loop(cfg);
  while (loop.iterations < cfg.max_iters) {
    const double mu = loop.mu;
    DenseTensor target = sub(obs, comp);
    axpy_in_place(target, 1.0 / mu, upsilon);
    DenseTensor t_next = tsvt(target, 1.0 / mu, spec);

    comp = sub(obs, t_next);
    axpy_in_place(comp, 1.0 / mu, upsilon);
    zero_where(comp, mask, true);

    DenseTensor fit = sub(sub(obs, t_next), comp);
    const double residual = frobenius_norm(fit) / norm_obs;
    axpy_in_place(upsilon, mu, fit);

    const double change = frobenius_norm(sub(t_next, t)) / std::max(frobenius_norm(t), kTiny);
    t = std::move(t_next);
    if (loop.step(residual, change)) break;
  }

  RecoveryReport rep;
  rep.solver = "tnn-tc";
  rep.recovered = t;
  zero_where(rep.recovered, mask, true);
  add_in_place(rep.recovered, obs);
  finish_report(rep, loop, cfg, spec, gamma, ground_truth, nullptr, watch);
  return rep;
}

RecoveryReport rpca_tnn(const DenseTensor& observed, const AdmmConfig& cfg,
                        const DenseTensor* truth_t, const DenseTensor* truth_e) {
  Stopwatch watch;
  cfg.validate();
  require_finite(observed, "observation");

  const Shape& shape = observed.shape();
  const TransformSpec spec = TransformSpec::for_shape(cfg.transform, shape);
  const SmoothnessSet gamma = SmoothnessSet::make(cfg.gamma_modes, shape.order());
  const double lambda = cfg.lambda.value_or(default_trpca_lambda(shape, spec));
  const double norm_obs = std::max(frobenius_norm(observed), kTiny);

  DenseTensor t = DenseTensor::zeros(shape);
  DenseTensor sparse = DenseTensor::zeros(shape);
  DenseTensor upsilon = DenseTensor::zeros(shape);

  AdmmLoop loop(cfg);
  while (loop.iterations < cfg.max_iters) {
    const double mu = loop.mu;
    DenseTensor target = sub(observed, sparse);
    axpy_in_place(target, 1.0 / mu, upsilon);
    DenseTensor t_next = tsvt(target, 1.0 / mu, spec);

    DenseTensor residual_dir = sub(observed, t_next);
    axpy_in_place(residual_dir, 1.0 / mu, upsilon);
    const double shrink = cfg.e_shrink_reciprocal ? 1.0 / (lambda * mu) : lambda / mu;
    sparse = soft_threshold(residual_dir, shrink);

    DenseTensor fit = sub(sub(observed, t_next), sparse);
    const double residual = frobenius_norm(fit) / norm_obs;
    axpy_in_place(upsilon, mu, fit);

    const double change = frobenius_norm(sub(t_next, t)) / std::max(frobenius_norm(t), kTiny);
    t = std::move(t_next);
    if (loop.step(residual, change)) break;
  }

  RecoveryReport rep;
  rep.solver = "tnn-trpca";
  rep.recovered = std::move(t);
  rep.sparse = std::move(sparse);
  rep.lambda_used = lambda;
  finish_report(rep, loop, cfg, spec, gamma, truth_t, truth_e, watch);
  return rep;
}

}  // namespace tctv

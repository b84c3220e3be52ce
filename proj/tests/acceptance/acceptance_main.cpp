// Acceptance suite: end-to-end checks of the recovery toolkit at desk scale.
// Each criterion prints one [PASS]/[FAIL] line; the process exits nonzero if
// any criterion fails.

#include <Eigen/SVD>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <tctv/gradient.hpp>
#include <tctv/metrics.hpp>
#include <tctv/phase.hpp>
#include <tctv/rng.hpp>
#include <tctv/solver.hpp>
#include <tctv/synthesis.hpp>
#include <tctv/tensor_io.hpp>
#include <tctv/tsvd.hpp>

using namespace tctv;
using clock_type = std::chrono::steady_clock;

namespace {

constexpr std::uint64_t kSuiteSeed = 2024;

int g_failures = 0;

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

DenseTensor random_tensor(const Shape& shape, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> data(static_cast<std::size_t>(shape.size()));
  for (auto& x : data) x = gauss(rng);
  return DenseTensor::from_real(shape, std::move(data));
}

double rel_diff(const DenseTensor& a, const DenseTensor& b) {
  return frobenius_norm(sub(a, b)) / std::max(frobenius_norm(b), 1e-300);
}

// ---------------------------------------------------------------- criterion 1

DenseTensor t_product_bdiag_oracle(const DenseTensor& a, const DenseTensor& b,
                                   const TransformSpec& spec) {
  const DenseTensor af = forward_dense_reference(a, spec);
  const DenseTensor bf = forward_dense_reference(b, spec);
  const Eigen::MatrixXcd big = bdiag_cx(af) * bdiag_cx(bf);
  const std::int64_t n0 = a.shape().dim(0), n1 = b.shape().dim(1);
  std::vector<std::int64_t> dims{n0, n1};
  const auto trailing = a.shape().trailing_dims();
  dims.insert(dims.end(), trailing.begin(), trailing.end());
  DenseTensor cf = DenseTensor::zeros(Shape(dims), ScalarKind::Complex);
  for (std::int64_t s = 0; s < cf.shape().trailing_size(); ++s)
    face_map_cx(cf, s) = big.block(s * n0, s * n1, n0, n1);
  return inverse(cf, spec, true);
}

void criterion_1_algebra() {
  const auto start = clock_type::now();
  const Shape sh({4, 5, 3, 2});
  const std::array<TransformKind, 3> kinds{TransformKind::Dft, TransformKind::Dct,
                                           TransformKind::RandomOrthogonal};
  int checked = 0, violations = 0;
  std::string first_violation;
  auto fail = [&](const std::string& what) {
    ++violations;
    if (first_violation.empty()) first_violation = what;
  };

  for (const auto kind : kinds) {
    const auto spec = TransformSpec::make(kind, sh.trailing_dims(), 11);
    for (int trial = 0; trial < 50; ++trial) {
      const std::uint64_t seed = derive_seed(kSuiteSeed, static_cast<int>(kind), trial);
      ++checked;

      // Eq. 4a energy identity: ell * |t|^2 == |L(t)|^2 to 1e-8 relative.
      const auto t = random_tensor(sh, seed);
      const double e0 = spec.scale_factor() * std::pow(frobenius_norm(t), 2);
      const double e1 = std::pow(frobenius_norm(forward(t, spec)), 2);
      if (std::abs(e0 - e1) > 1e-8 * std::max(1.0, e0)) fail("energy identity");

      // t-product equals the block-diagonal matrix route.
      const auto a = random_tensor(Shape({4, 3, 3, 2}), derive_seed(seed, 1));
      const auto b = random_tensor(Shape({3, 5, 3, 2}), derive_seed(seed, 2));
      if (rel_diff(t_product(a, b, spec), t_product_bdiag_oracle(a, b, spec)) > 1e-9)
        fail("t-product vs bdiag");

      // Transpose involution.
      if (rel_diff(t_transpose(t_transpose(t, spec), spec), t) > 1e-10)
        fail("transpose involution");

      // Rank and approximation optimality against face-mode unfoldings.
      const auto factors = tsvd(t, spec);
      for (std::int64_t k = 1; k <= 3; ++k) {
        const double tensor_err = frobenius_norm(sub(t, truncate_rank_k(factors, k)));
        for (int mode = 0; mode < 2; ++mode) {
          const Eigen::MatrixXd m = unfold(t, mode);
          Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
          Eigen::VectorXd kept = svd.singularValues();
          for (std::int64_t i = k; i < kept.size(); ++i) kept[i] = 0.0;
          const double matrix_err =
              (m - svd.matrixU() * kept.asDiagonal() * svd.matrixV().transpose()).norm();
          if (tensor_err > matrix_err + 1e-9 * std::max(1.0, matrix_err))
            fail("rank-k approximation bound");
        }
      }
      const auto low = truncate_rank_k(factors, 2);
      const std::int64_t tr = tsvd_rank(low, spec);
      for (int mode = 0; mode < 2; ++mode) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(unfold(low, mode));
        const auto sv = svd.singularValues();
        std::int64_t mrank = 0;
        for (std::int64_t i = 0; i < sv.size(); ++i)
          if (sv[i] > 1e-9 * sv[0]) ++mrank;
        if (tr > mrank) fail("tensor rank vs unfolding rank");
      }

      // t-SVT prox optimality for this tau.
      const double tau = 0.25 * singular_tube_sup(t, spec)[0];
      const auto prox = tsvt(t, tau, spec);
      const double d0 = frobenius_norm(sub(prox, t));
      const double best = tau * tnn(prox, spec) + 0.5 * d0 * d0;
      for (int p = 0; p < 3; ++p) {
        auto perturbed = prox;
        axpy_in_place(perturbed, 0.05 * frobenius_norm(t),
                      random_tensor(sh, derive_seed(seed, 100 + p)));
        const double d = frobenius_norm(sub(perturbed, t));
        if (best > tau * tnn(perturbed, spec) + 0.5 * d * d + 1e-12) fail("t-SVT prox");
      }
    }
  }
  const double elapsed = seconds_since(start);
  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "%d instances per transform kind, %d violations%s%s, %.1f s (budget 120 s)",
                checked / 3, violations, first_violation.empty() ? "" : ": ",
                first_violation.c_str(), elapsed);
  report(1, "t-SVD algebra property suite", violations == 0 && elapsed < 120.0, detail);
}

// ------------------------------------------------------------- criteria 2 & 3

struct RecoveryOutcome {
  std::vector<RecoveryReport> reports;  // stashed for the telemetry criterion
};

RecoveryOutcome g_outcome;

AdmmConfig acceptance_config(TransformKind kind) {
  AdmmConfig cfg;
  cfg.transform = {kind, 0};
  cfg.gamma_modes = {0, 1};
  cfg.tol = 1e-8;
  cfg.compute_incoherence = false;
  return cfg;
}

void criterion_2_tc_exact_recovery() {
  const auto start = clock_type::now();
  const Shape dims({40, 40, 10, 10});
  const std::int64_t rank = 4;
  const double p = 0.5;
  std::string detail;
  bool pass = true;
  for (const auto kind : {TransformKind::Dft, TransformKind::Dct}) {
    int good = 0;
    double worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
      SynthSpec synth;
      synth.dims = dims;
      synth.rank = rank;
      synth.regions = 25;
      synth.transform = {kind, 0};
      synth.seed = derive_seed(kSuiteSeed, 200 + static_cast<int>(kind), trial);
      const auto truth = gen_lowrank_smooth(synth);
      const auto mask = gen_mask(dims, p, derive_seed(synth.seed, 1));
      const auto rep =
          complete_tctv(project(truth, mask), mask, acceptance_config(kind), &truth);
      const bool ok = rep.rel_err && *rep.rel_err < 1e-4 && rep.estimated_rank == rank &&
                      rep.iterations <= 500;
      if (ok) ++good;
      worst = std::max(worst, rep.rel_err.value_or(1.0));
      g_outcome.reports.push_back(rep);
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s %d/20 trials (worst RelErr %.2e); ", to_string(kind).c_str(),
                  good, worst);
    detail += buf;
    pass = pass && good >= 19;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.0f s", seconds_since(start));
  report(2, "tensor completion exact recovery (40x40x10x10, R=4, p=0.5)", pass, detail + buf);
}

void criterion_3_trpca_exact_recovery() {
  const auto start = clock_type::now();
  const Shape dims({40, 40, 10, 10});
  const std::int64_t rank = 4;
  int good = 0;
  double worst = 0, worst_support = 0;
  for (int trial = 0; trial < 20; ++trial) {
    SynthSpec synth;
    synth.dims = dims;
    synth.rank = rank;
    synth.regions = 25;
    synth.transform = {TransformKind::Dft, 0};
    synth.seed = derive_seed(kSuiteSeed, 300, trial);
    const auto truth = gen_lowrank_smooth(synth);
    CorruptionSpec corr;
    corr.ratio = 0.05;
    corr.seed = derive_seed(synth.seed, 2);
    const auto sparse = gen_sparse_corruption(corr, dims);
    const auto rep =
        rpca_tctv(add(truth, sparse), acceptance_config(TransformKind::Dft), &truth, &sparse);

    // Support error at tolerance 1e-3: symmetric difference over true support.
    std::int64_t sym_diff = 0, m = 0;
    const auto& est = rep.sparse->real();
    const auto& ref = sparse.real();
    for (std::size_t i = 0; i < ref.size(); ++i) {
      const bool in_ref = ref[i] != 0.0;
      const bool in_est = std::abs(est[i]) > 1e-3;
      m += in_ref;
      sym_diff += in_ref != in_est;
    }
    const double support_err = static_cast<double>(sym_diff) / static_cast<double>(m);
    const bool ok = rep.rel_err && *rep.rel_err < 1e-4 && support_err <= 0.01;
    if (ok) ++good;
    worst = std::max(worst, rep.rel_err.value_or(1.0));
    worst_support = std::max(worst_support, support_err);
    g_outcome.reports.push_back(rep);
  }
  char detail[192];
  std::snprintf(detail, sizeof(detail),
                "%d/20 trials (worst RelErr %.2e, worst support error %.3f%%), lambda = "
                "1/sqrt(n_max*ell), %.0f s",
                good, worst, 100.0 * worst_support, seconds_since(start));
  report(3, "robust PCA exact recovery (40x40x10x10, R=4, 5% corruption)", good >= 19, detail);
}

// ---------------------------------------------------------------- criterion 4

void criterion_4_gradient_rank_sandwich() {
  const auto start = clock_type::now();
  const Shape dims({24, 24, 6, 6});
  const auto spec = TransformSpec::make(TransformKind::Dft, dims.trailing_dims());
  int violations = 0;
  for (int trial = 0; trial < 50; ++trial) {
    SynthSpec synth;
    synth.dims = dims;
    synth.rank = 2 + trial % 7;  // ranks 2..8 across seeds
    synth.regions = 25;
    synth.transform = {TransformKind::Dft, 0};
    synth.seed = derive_seed(kSuiteSeed, 400, trial);
    const auto truth = gen_lowrank_smooth(synth);
    const std::int64_t r = tsvd_rank(truth, spec);
    for (int mode : {0, 1}) {
      const std::int64_t gr = tsvd_rank(grad(truth, mode), spec);
      if (gr < r - 1 || gr > r) ++violations;
    }
  }
  char detail[128];
  std::snprintf(detail, sizeof(detail), "50 generator tensors, %d violations, %.0f s", violations,
                seconds_since(start));
  report(4, "gradient-tensor rank sandwich (R-1 <= rank(G_k) <= R)", violations == 0, detail);
}

// ---------------------------------------------------------------- criterion 5

void criterion_5_laplacian_solver() {
  const auto start = clock_type::now();
  bool pass = true;
  std::string detail;

  // Forward-apply-then-solve roundtrip on 20 random instances.
  double worst = 0;
  const Shape sh({18, 14, 6, 5});
  const auto gamma = SmoothnessSet::make({0, 1, 3}, 4);
  const auto eig = make_diff_eigenvalues(sh, gamma);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x0 = random_tensor(sh, derive_seed(kSuiteSeed, 500, trial));
    DenseTensor rhs = x0;
    for (int mode : gamma.modes()) add_in_place(rhs, grad_adjoint(grad(x0, mode), mode));
    worst = std::max(worst, rel_diff(solve_identity_plus_laplacian(rhs, eig), x0));
  }
  pass = pass && worst < 1e-9;
  detail += "roundtrip worst " + std::to_string(worst) + "; ";

  // Dense-oracle agreement on small dims: materialize the full operator.
  const Shape small({6, 5, 4});
  const auto gamma2 = SmoothnessSet::make({0, 1}, 3);
  const auto eig2 = make_diff_eigenvalues(small, gamma2);
  const std::int64_t n = small.size();
  Eigen::MatrixXd op(n, n);
  for (std::int64_t j = 0; j < n; ++j) {
    auto basis = DenseTensor::zeros(small);
    basis.real()[static_cast<std::size_t>(j)] = 1.0;
    DenseTensor out = basis;
    for (int mode : gamma2.modes()) add_in_place(out, grad_adjoint(grad(basis, mode), mode));
    for (std::int64_t i = 0; i < n; ++i) op(i, j) = out.real()[static_cast<std::size_t>(i)];
  }
  double worst_dense = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto rhs = random_tensor(small, derive_seed(kSuiteSeed, 501, trial));
    const Eigen::Map<const Eigen::VectorXd> rhs_vec(rhs.real().data(), n);
    const Eigen::VectorXd dense = op.ldlt().solve(rhs_vec.eval());
    const auto fft_solution = solve_identity_plus_laplacian(rhs, eig2);
    const Eigen::Map<const Eigen::VectorXd> got(fft_solution.real().data(), n);
    worst_dense = std::max(worst_dense, (got - dense).norm() / dense.norm());
  }
  pass = pass && worst_dense < 1e-10;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "dense-oracle worst %.2e, %.0f s", worst_dense,
                seconds_since(start));
  report(5, "FFT-diagonalized (I + sum grad^T grad) solver", pass, detail + buf);
}

// ---------------------------------------------------------------- criterion 6

void criterion_6_phase_dominance() {
  const auto start = clock_type::now();
  bool pass = true;
  std::string detail;
  for (const auto problem : {ProblemKind::Completion, ProblemKind::Rpca}) {
    PhaseGridSpec spec;
    spec.problem = problem;
    spec.dims = Shape({20, 20, 8, 8});
    spec.ranks = {1, 2, 3, 4, 6, 8};
    spec.axis2 = problem == ProblemKind::Completion
                     ? std::vector<double>{0.25, 0.35, 0.45, 0.55, 0.7, 0.85}
                     : std::vector<double>{0.05, 0.1, 0.15, 0.2, 0.3, 0.4};
    spec.trials = 5;
    spec.regions = 10;
    spec.seed = kSuiteSeed;
    spec.solver_cfg.transform = {TransformKind::Dft, 0};
    spec.solver_cfg.gamma_modes = {0, 1};
    const auto cells = run_phase_grid(spec);

    const std::size_t half = cells.size() / 2;  // tctv block, then tnn block
    int wins = 0;
    bool contained = true;
    int errors = 0;
    for (std::size_t i = 0; i < half; ++i) {
      const auto& ours = cells[i];
      const auto& baseline = cells[i + half];
      if (!ours.error.empty() || !baseline.error.empty()) ++errors;
      if (ours.success && !baseline.success) ++wins;
      if (baseline.success && !ours.success) contained = false;
    }
    pass = pass && contained && wins >= 3 && errors == 0;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s: containment %s, %d strict wins, %d cell errors; ",
                  to_string(problem).c_str(), contained ? "yes" : "NO", wins, errors);
    detail += buf;
  }
  const double elapsed = seconds_since(start);
  pass = pass && elapsed < 1800.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.0f s (budget 1800 s)", elapsed);
  report(6, "phase-transition dominance over the TNN baseline", pass, detail + buf);
}

// ---------------------------------------------------------------- criterion 7

void criterion_7_telemetry() {
  int bad_final = 0, bad_tail = 0;
  for (const auto& rep : g_outcome.reports) {
    if (!(rep.final_residual < 1e-7)) ++bad_final;
    const auto& tr = rep.residual_trace;
    for (std::size_t i = tr.size() * 4 / 5; i + 1 < tr.size(); ++i)
      if (tr[i + 1] > 10.0 * tr[i]) {
        ++bad_tail;
        break;
      }
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "%zu runs: %d with final residual >= 1e-7, %d with non-monotone tail (10x jitter)",
                g_outcome.reports.size(), bad_final, bad_tail);
  report(7, "solver convergence telemetry", bad_final == 0 && bad_tail == 0, detail);
}

// ---------------------------------------------------------------- criterion 8

std::string slurp(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(TCTV_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

void criterion_8_determinism() {
  const auto start = clock_type::now();
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "tctv_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string base = (dir / "").string();

  struct Artifact {
    std::string command;  // with %R placeholder for the round
    std::vector<std::string> files;
  };
  const std::vector<Artifact> artifacts = {
      {"synth --dims 16,16,4,4 --rank 3 --regions 8 --seed 11 --out " + base +
           "t%R.tnsr --mask-rate 0.6 --mask-out " + base + "m%R.tnsr --corrupt-ratio 0.05 "
           "--corrupt-out " + base + "e%R.tnsr --observed-out " + base + "o%R.tnsr --sidecar " +
           base + "s%R.json",
       {"t%R.tnsr", "m%R.tnsr", "e%R.tnsr", "o%R.tnsr", "s%R.json"}},
      {"complete --in " + base + "t1.tnsr --mask " + base + "m1.tnsr --truth " + base +
           "t1.tnsr --gamma 1,2 --seed 11 --out " + base + "rec%R.tnsr --report " + base +
           "rep%R.json",
       {"rec%R.tnsr", "rep%R.json"}},
      {"rpca --in " + base + "o2%R.tnsr --gamma 1,2 --seed 11 --out " + base +
           "rrec%R.tnsr --sparse-out " + base + "rsp%R.tnsr --report " + base + "rrep%R.json",
       {"rrec%R.tnsr", "rsp%R.tnsr", "rrep%R.json"}},
      {"phase --problem tc --dims 12,12,3,3 --ranks 1,2 --axis2 0.4,0.8 --trials 2 --regions 6 "
       "--gamma 1,2 --seed 11 --out " + base + "grid%R.csv",
       {"grid%R.csv"}},
      {"metrics --a " + base + "rec1.tnsr --b " + base + "t1.tnsr --out " + base + "met%R.json",
       {"met%R.json"}},
  };

  // The rpca artifact needs its own observation; derive one per round from the
  // same seed so both rounds see identical bytes.
  for (const std::string round : {"1", "2"}) {
    run_cli("synth --dims 12,12,4,4 --rank 2 --regions 6 --seed 13 --out " + base + "base" + round +
            ".tnsr --corrupt-ratio 0.05 --observed-out " + base + "o2" + round + ".tnsr");
  }

  bool pass = true;
  std::string detail;
  for (const auto& artifact : artifacts) {
    std::vector<std::string> payload(2);
    for (int round = 1; round <= 2; ++round) {
      std::string cmd = artifact.command;
      std::string tag = std::to_string(round);
      for (std::size_t at = cmd.find("%R"); at != std::string::npos; at = cmd.find("%R"))
        cmd.replace(at, 2, tag);
      if (run_cli(cmd) != 0) {
        pass = false;
        detail += "command failed: " + artifact.command.substr(0, 24) + "...; ";
      }
      for (const auto& f : artifact.files) {
        std::string name = f;
        for (std::size_t at = name.find("%R"); at != std::string::npos; at = name.find("%R"))
          name.replace(at, 2, tag);
        payload[static_cast<std::size_t>(round - 1)] += slurp(dir / name);
      }
    }
    if (payload[0].empty() || payload[0] != payload[1]) {
      pass = false;
      detail += "byte mismatch in " + artifact.files.front() + "; ";
    }
  }
  fs::remove_all(dir);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "5 command families rerun, %.0f s", seconds_since(start));
  report(8, "seeded CLI reruns produce byte-identical artifacts", pass, detail + buf);
}

}  // namespace

int main() {
  const auto start = clock_type::now();
  criterion_1_algebra();
  criterion_2_tc_exact_recovery();
  criterion_3_trpca_exact_recovery();
  criterion_4_gradient_rank_sandwich();
  criterion_5_laplacian_solver();
  criterion_6_phase_dominance();
  criterion_7_telemetry();
  criterion_8_determinism();
  std::printf("acceptance: %d/8 criteria passed in %.0f s\n", 8 - g_failures,
              seconds_since(start));
  return g_failures == 0 ? 0 : 1;
}

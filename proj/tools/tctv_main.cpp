#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <tctv/metrics.hpp>
#include <tctv/phase.hpp>
#include <tctv/report.hpp>
#include <tctv/rng.hpp>
#include <tctv/solver.hpp>
#include <tctv/synthesis.hpp>
#include <tctv/tensor_io.hpp>

namespace {

using nlohmann::ordered_json;
using namespace tctv;

// Exit codes: 2 config/usage, 3 I/O, 4 file format, 5 numeric/runtime.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kIoError = 3,
  kFormatError = 4,
  kRuntimeError = 5,
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << text;
  if (!os) throw IoError("write failed: " + path);
}

struct CommonOpts {
  std::string transform = "dft";
  std::uint64_t rot_seed = 0;
  std::uint64_t seed = 0;
  std::vector<int> gamma;  // 1-based on the CLI
  double tol = 1e-7;
  int max_iters = 500;
  double mu0 = 1e-4;
  double rho = 1.1;
  double mu_max = 1e10;
  bool include_timing = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool solver_knobs) {
  cmd->add_option("--transform", o.transform, "Transform kind: dft|dct|rot")
      ->check(CLI::IsMember({"dft", "dct", "rot"}));
  cmd->add_option("--rot-seed", o.rot_seed, "Seed for the random orthogonal transform");
  cmd->add_option("--seed", o.seed, "Base RNG seed");
  if (solver_knobs) {
    cmd->add_option("--gamma", o.gamma, "Smoothness modes, 1-based (e.g. 1,2)")->delimiter(',');
    cmd->add_option("--tol", o.tol, "Stopping tolerance");
    cmd->add_option("--max-iters", o.max_iters, "Iteration cap");
    cmd->add_option("--mu0", o.mu0, "Initial penalty");
    cmd->add_option("--rho", o.rho, "Penalty growth factor");
    cmd->add_option("--mu-max", o.mu_max, "Penalty cap");
    cmd->add_flag("--include-timing", o.include_timing,
                  "Include wall-clock timing in JSON reports (breaks byte reproducibility)");
  }
}

TransformChoice transform_choice(const CommonOpts& o) {
  return {transform_kind_from_string(o.transform), o.rot_seed};
}

// Smoothness-set default by input shape: images and generic tensors smooth in
// the two spatial modes; taller order-3 cubes also along mode 3; order-4
// video-like data along modes 1, 2, 4.
std::vector<int> default_gamma(const Shape& shape) {
  if (shape.order() == 3 && shape.dim(2) > 4) return {0, 1, 2};
  if (shape.order() >= 4) return {0, 1, 3};
  return {0, 1};
}

std::vector<int> resolve_gamma(const CommonOpts& o, const Shape& shape) {
  if (o.gamma.empty()) return default_gamma(shape);
  std::vector<int> modes;
  for (int g : o.gamma) modes.push_back(g - 1);
  return modes;
}

AdmmConfig solver_config(const CommonOpts& o, const Shape& shape) {
  AdmmConfig cfg;
  cfg.transform = transform_choice(o);
  cfg.gamma_modes = resolve_gamma(o, shape);
  cfg.tol = o.tol;
  cfg.max_iters = o.max_iters;
  cfg.mu0 = o.mu0;
  cfg.rho = o.rho;
  cfg.mu_max = o.mu_max;
  return cfg;
}

int cmd_synth(const CommonOpts& common, const std::vector<std::int64_t>& dims, std::int64_t rank,
              std::int64_t regions, const std::string& out, std::string sidecar,
              std::optional<double> mask_rate, const std::string& mask_out,
              std::optional<double> corrupt_ratio, std::optional<std::int64_t> corrupt_count,
              const std::string& corrupt_out, const std::string& observed_out) {
  SynthSpec spec;
  spec.dims = Shape(dims);
  spec.rank = rank;
  spec.regions = regions;
  spec.transform = transform_choice(common);
  spec.seed = common.seed;
  const DenseTensor truth = gen_lowrank_smooth(spec);
  write_tnsr(out, truth);

  ordered_json meta;
  meta["schema"] = "tctv-synth/v1";
  meta["dims"] = dims;
  meta["rank"] = rank;
  meta["regions"] = regions;
  meta["transform"] = common.transform;
  if (spec.transform.kind == TransformKind::RandomOrthogonal) meta["rot_seed"] = common.rot_seed;
  meta["seed"] = common.seed;
  meta["truth"] = out;

  std::optional<BoolTensor> mask;
  if (mask_rate) {
    mask = gen_mask(spec.dims, *mask_rate, derive_seed(common.seed, 0x6d61736b));
    const std::string path = mask_out.empty() ? out + ".mask.tnsr" : mask_out;
    write_mask_tnsr(path, *mask);
    meta["mask"] = path;
    meta["mask_rate"] = *mask_rate;
    meta["mask_observed"] = mask->count_true();
  }
  std::optional<DenseTensor> corruption;
  if (corrupt_ratio || corrupt_count) {
    CorruptionSpec corr;
    corr.ratio = corrupt_ratio;
    corr.cardinality = corrupt_count;
    corr.seed = derive_seed(common.seed, 0x636f7272);
    corruption = gen_sparse_corruption(corr, spec.dims);
    const std::string path = corrupt_out.empty() ? out + ".sparse.tnsr" : corrupt_out;
    write_tnsr(path, *corruption);
    meta["corruption"] = path;
    meta["corruption_count"] = estimate_sparsity(*corruption, 0.5);
  }
  if (!observed_out.empty()) {
    DenseTensor observed = truth;
    if (corruption) add_in_place(observed, *corruption);
    if (mask) observed = project(observed, *mask);
    write_tnsr(observed_out, observed);
    meta["observed"] = observed_out;
  }

  if (sidecar.empty()) sidecar = out + ".json";
  write_text(sidecar, meta.dump(2) + "\n");
  std::cout << "wrote " << out << " (" << Shape(dims).str() << ", rank " << rank << ")\n";
  return kOk;
}

int cmd_complete(const CommonOpts& common, const std::string& in, const std::string& mask_path,
                 std::optional<double> mask_rate, const std::string& truth_path,
                 const std::string& solver, const std::string& out, const std::string& out_image,
                 const std::string& report_path) {
  const DenseTensor observed = read_tensor_auto(in);
  BoolTensor mask;
  if (!mask_path.empty())
    mask = read_mask_tnsr(mask_path);
  else if (mask_rate)
    mask = gen_mask(observed.shape(), *mask_rate, derive_seed(common.seed, 0x6d61736b));
  else
    throw std::invalid_argument("complete: either --mask or --mask-rate is required");

  std::optional<DenseTensor> truth;
  if (!truth_path.empty()) truth = read_tensor_auto(truth_path);

  const AdmmConfig cfg = solver_config(common, observed.shape());
  const SolverKind kind = solver_kind_from_string(solver);
  const RecoveryReport rep = kind == SolverKind::Tctv
                                 ? complete_tctv(observed, mask, cfg, truth ? &*truth : nullptr)
                                 : complete_tnn(observed, mask, cfg, truth ? &*truth : nullptr);

  if (!out.empty()) write_tnsr(out, rep.recovered);
  if (!out_image.empty()) write_image_pnm(out_image, rep.recovered);
  if (!report_path.empty()) write_text(report_path, report_json(rep, common.include_timing));
  std::cout << rep.solver << ": iterations " << rep.iterations << ", final residual "
            << rep.final_residual << ", estimated rank " << rep.estimated_rank;
  if (rep.rel_err) std::cout << ", rel_err " << *rep.rel_err;
  std::cout << "\n";
  std::cerr << "wall seconds: " << rep.wall_seconds << "\n";
  return kOk;
}

int cmd_rpca(const CommonOpts& common, const std::string& in, const std::string& truth_path,
             const std::string& truth_sparse_path, const std::string& solver,
             std::optional<double> lambda, const std::string& out, const std::string& sparse_out,
             const std::string& out_image, const std::string& report_path) {
  const DenseTensor observed = read_tensor_auto(in);
  std::optional<DenseTensor> truth, truth_sparse;
  if (!truth_path.empty()) truth = read_tensor_auto(truth_path);
  if (!truth_sparse_path.empty()) truth_sparse = read_tensor_auto(truth_sparse_path);

  AdmmConfig cfg = solver_config(common, observed.shape());
  cfg.lambda = lambda;
  const TransformSpec spec = TransformSpec::for_shape(cfg.transform, observed.shape());
  const double lambda_used = lambda.value_or(default_trpca_lambda(observed.shape(), spec));
  std::cout << "lambda = " << lambda_used << (lambda ? "" : "  (default 1/sqrt(n_max * ell))")
            << "\n";

  const SolverKind kind = solver_kind_from_string(solver);
  const RecoveryReport rep =
      kind == SolverKind::Tctv ? rpca_tctv(observed, cfg, truth ? &*truth : nullptr,
                                           truth_sparse ? &*truth_sparse : nullptr)
                               : rpca_tnn(observed, cfg, truth ? &*truth : nullptr,
                                          truth_sparse ? &*truth_sparse : nullptr);

  if (!out.empty()) write_tnsr(out, rep.recovered);
  if (!sparse_out.empty() && rep.sparse) write_tnsr(sparse_out, *rep.sparse);
  if (!out_image.empty()) write_image_pnm(out_image, rep.recovered);
  if (!report_path.empty()) write_text(report_path, report_json(rep, common.include_timing));
  std::cout << rep.solver << ": iterations " << rep.iterations << ", final residual "
            << rep.final_residual << ", estimated rank " << rep.estimated_rank;
  if (rep.estimated_sparsity) std::cout << ", estimated sparsity " << *rep.estimated_sparsity;
  if (rep.rel_err) std::cout << ", rel_err " << *rep.rel_err;
  std::cout << "\n";
  std::cerr << "wall seconds: " << rep.wall_seconds << "\n";
  return kOk;
}

int cmd_phase(const CommonOpts& common, const std::string& problem,
              const std::vector<std::string>& solvers, const std::vector<std::int64_t>& dims,
              const std::vector<std::int64_t>& ranks, const std::vector<double>& axis2,
              int trials, std::int64_t regions, double success_threshold,
              const std::string& out) {
  PhaseGridSpec spec;
  spec.problem = problem_kind_from_string(problem);
  spec.solvers.clear();
  for (const auto& s : solvers) spec.solvers.push_back(solver_kind_from_string(s));
  spec.dims = Shape(dims);
  spec.ranks = ranks;
  spec.axis2 = axis2;
  spec.trials = trials;
  spec.regions = regions;
  spec.success_rel_err = success_threshold;
  spec.seed = common.seed;
  spec.solver_cfg = solver_config(common, spec.dims);

  const auto cells = run_phase_grid(spec);
  const std::string csv = phase_csv(cells);
  if (!out.empty())
    write_text(out, csv);
  else
    std::cout << csv;
  int failures = 0;
  for (const auto& c : cells)
    if (!c.error.empty()) ++failures;
  if (failures > 0) std::cerr << failures << " cell(s) recorded failures\n";
  std::cout << "phase grid: " << cells.size() << " cells done\n";
  return kOk;
}

int cmd_metrics(const CommonOpts& common, const std::string& a, const std::string& b, double peak,
                const std::string& out) {
  const DenseTensor x = read_tensor_auto(a);
  const DenseTensor ref = read_tensor_auto(b);
  const TransformSpec spec = TransformSpec::for_shape(transform_choice(common), x.shape());
  const MetricReport rep = compute_metrics(x, ref, spec, peak);
  const std::string text = metrics_json(rep);
  std::cout << text;
  if (!out.empty()) write_text(out, text);
  return kOk;
}

void emit_error(const char* kind, int code, const std::string& message) {
  ordered_json j;
  j["error"]["kind"] = kind;
  j["error"]["exit_code"] = code;
  j["error"]["message"] = message;
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tctv: tensor completion and robust PCA via transform t-SVD "
               "and correlated total variation"};
  app.require_subcommand(1);

  auto* synth = app.add_subcommand("synth", "Generate low-rank + smooth ground truth");
  CommonOpts synth_opts;
  std::vector<std::int64_t> synth_dims;
  std::int64_t synth_rank = 4, synth_regions = 25;
  std::string synth_out, synth_sidecar, synth_mask_out, synth_corrupt_out, synth_observed_out;
  std::optional<double> synth_mask_rate, synth_corrupt_ratio;
  std::optional<std::int64_t> synth_corrupt_count;
  synth->add_option("--dims", synth_dims, "Tensor dims, e.g. 40,40,10,10")
      ->delimiter(',')
      ->required();
  synth->add_option("--rank", synth_rank, "Target t-SVD rank");
  synth->add_option("--regions", synth_regions, "Piecewise-constant regions per slice");
  synth->add_option("--out", synth_out, "Output TNSR path")->required();
  synth->add_option("--sidecar", synth_sidecar, "Spec sidecar JSON path (default <out>.json)");
  synth->add_option("--mask-rate", synth_mask_rate, "Also write a Bernoulli mask at this rate");
  synth->add_option("--mask-out", synth_mask_out, "Mask output path (default <out>.mask.tnsr)");
  synth->add_option("--corrupt-ratio", synth_corrupt_ratio, "Also write a sparse +-1 corruption");
  synth->add_option("--corrupt-count", synth_corrupt_count, "Corruption cardinality");
  synth->add_option("--corrupt-out", synth_corrupt_out,
                    "Corruption output path (default <out>.sparse.tnsr)");
  synth->add_option("--observed-out", synth_observed_out,
                    "Also write the degraded observation (masked and/or corrupted)");
  add_common(synth, synth_opts, /*solver_knobs=*/false);

  auto* complete = app.add_subcommand("complete", "Tensor completion from partial observations");
  CommonOpts complete_opts;
  std::string complete_in, complete_mask, complete_truth, complete_solver = "tctv";
  std::string complete_out, complete_out_image, complete_report;
  std::optional<double> complete_mask_rate;
  complete->add_option("--in", complete_in, "Observed tensor (TNSR or PGM/PPM)")->required();
  complete->add_option("--mask", complete_mask, "Observation mask TNSR (nonzero = observed)");
  complete->add_option("--mask-rate", complete_mask_rate,
                       "Generate a Bernoulli mask at this rate (uses --seed)");
  complete->add_option("--truth", complete_truth, "Ground truth for error reporting");
  complete->add_option("--solver", complete_solver, "tctv|tnn")
      ->check(CLI::IsMember({"tctv", "tnn"}));
  complete->add_option("--out", complete_out, "Recovered tensor TNSR path");
  complete->add_option("--out-image", complete_out_image, "Recovered image PGM/PPM path");
  complete->add_option("--report", complete_report, "Recovery report JSON path");
  add_common(complete, complete_opts, /*solver_knobs=*/true);

  auto* rpca = app.add_subcommand("rpca", "Robust decomposition into structured + sparse parts");
  CommonOpts rpca_opts;
  std::string rpca_in, rpca_truth, rpca_truth_sparse, rpca_solver = "tctv";
  std::string rpca_out, rpca_sparse_out, rpca_out_image, rpca_report;
  std::optional<double> rpca_lambda;
  rpca->add_option("--in", rpca_in, "Observed tensor (TNSR or PGM/PPM)")->required();
  rpca->add_option("--truth", rpca_truth, "Structured ground truth for error reporting");
  rpca->add_option("--truth-sparse", rpca_truth_sparse, "Sparse ground truth");
  rpca->add_option("--solver", rpca_solver, "tctv|tnn")->check(CLI::IsMember({"tctv", "tnn"}));
  rpca->add_option("--lambda", rpca_lambda, "Sparsity weight (default 1/sqrt(n_max * ell))");
  rpca->add_option("--out", rpca_out, "Recovered tensor TNSR path");
  rpca->add_option("--sparse-out", rpca_sparse_out, "Recovered sparse component TNSR path");
  rpca->add_option("--out-image", rpca_out_image, "Recovered image PGM/PPM path");
  rpca->add_option("--report", rpca_report, "Recovery report JSON path");
  add_common(rpca, rpca_opts, /*solver_knobs=*/true);

  auto* phase = app.add_subcommand("phase", "Phase-transition grid over rank and rate");
  CommonOpts phase_opts;
  std::string phase_problem = "tc", phase_out;
  std::vector<std::string> phase_solvers = {"tctv", "tnn"};
  std::vector<std::int64_t> phase_dims = {20, 20, 8, 8}, phase_ranks;
  std::vector<double> phase_axis2;
  int phase_trials = 5;
  std::int64_t phase_regions = 10;
  double phase_threshold = 0.05;
  phase->add_option("--problem", phase_problem, "tc|trpca")->check(CLI::IsMember({"tc", "trpca"}));
  phase->add_option("--solvers", phase_solvers, "Solvers to compare")->delimiter(',');
  phase->add_option("--dims", phase_dims, "Tensor dims")->delimiter(',');
  phase->add_option("--ranks", phase_ranks, "Rank axis values")->delimiter(',')->required();
  phase
      ->add_option("--axis2", phase_axis2,
                   "Second axis: sampling rate (tc) or corruption ratio (trpca)")
      ->delimiter(',')
      ->required();
  phase->add_option("--trials", phase_trials, "Trials per cell");
  phase->add_option("--regions", phase_regions, "Generator regions per slice");
  phase->add_option("--success-threshold", phase_threshold, "Success mean RelErr threshold");
  phase->add_option("--out", phase_out, "CSV output path (stdout when omitted)");
  add_common(phase, phase_opts, /*solver_knobs=*/true);

  auto* metrics = app.add_subcommand("metrics", "Compare two tensors or images");
  CommonOpts metrics_opts;
  std::string metrics_a, metrics_b, metrics_out;
  double metrics_peak = 1.0;
  metrics->add_option("--a", metrics_a, "Tensor under test")->required();
  metrics->add_option("--b", metrics_b, "Reference tensor")->required();
  metrics->add_option("--peak", metrics_peak, "Peak value for PSNR");
  metrics->add_option("--out", metrics_out, "Report JSON path (also printed)");
  add_common(metrics, metrics_opts, /*solver_knobs=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    emit_error("config", kConfigError, e.what());
    return kConfigError;
  }

  try {
    if (synth->parsed())
      return cmd_synth(synth_opts, synth_dims, synth_rank, synth_regions, synth_out,
                       synth_sidecar, synth_mask_rate, synth_mask_out, synth_corrupt_ratio,
                       synth_corrupt_count, synth_corrupt_out, synth_observed_out);
    if (complete->parsed())
      return cmd_complete(complete_opts, complete_in, complete_mask, complete_mask_rate,
                          complete_truth, complete_solver, complete_out, complete_out_image,
                          complete_report);
    if (rpca->parsed())
      return cmd_rpca(rpca_opts, rpca_in, rpca_truth, rpca_truth_sparse, rpca_solver, rpca_lambda,
                      rpca_out, rpca_sparse_out, rpca_out_image, rpca_report);
    if (phase->parsed())
      return cmd_phase(phase_opts, phase_problem, phase_solvers, phase_dims, phase_ranks,
                       phase_axis2, phase_trials, phase_regions, phase_threshold, phase_out);
    if (metrics->parsed())
      return cmd_metrics(metrics_opts, metrics_a, metrics_b, metrics_peak, metrics_out);
  } catch (const IoError& e) {
    emit_error("io", kIoError, e.what());
    return kIoError;
  } catch (const FormatError& e) {
    emit_error("format", kFormatError, e.what());
    return kFormatError;
  } catch (const std::invalid_argument& e) {
    emit_error("config", kConfigError, e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    emit_error("runtime", kRuntimeError, e.what());
    return kRuntimeError;
  }
  return kConfigError;
}

#include "tctv/phase.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "tctv/parallel.hpp"
#include "tctv/rng.hpp"

namespace tctv {

std::string to_string(ProblemKind kind) {
  return kind == ProblemKind::Completion ? "tc" : "trpca";
}

ProblemKind problem_kind_from_string(const std::string& name) {
  if (name == "tc") return ProblemKind::Completion;
  if (name == "trpca") return ProblemKind::Rpca;
  throw std::invalid_argument("unknown problem: " + name + " (expected tc|trpca)");
}

void PhaseGridSpec::validate() const {
  if (solvers.empty()) throw std::invalid_argument("PhaseGridSpec: no solvers");
  if (ranks.empty() || axis2.empty()) throw std::invalid_argument("PhaseGridSpec: empty axes");
  if (trials < 1) throw std::invalid_argument("PhaseGridSpec: trials must be >= 1");
  if (dims.order() < 3) throw std::invalid_argument("PhaseGridSpec: tensor order must be >= 3");
  for (double a : axis2)
    if (!(a > 0.0) || a > 1.0)
      throw std::invalid_argument("PhaseGridSpec: axis2 values must be in (0, 1]");
  solver_cfg.validate();
}

namespace {

RecoveryReport run_trial(const PhaseGridSpec& spec, SolverKind solver, std::int64_t rank,
                         double axis2, std::uint64_t trial_seed, const DenseTensor& truth) {
  AdmmConfig cfg = spec.solver_cfg;
  cfg.compute_incoherence = false;
  if (spec.problem == ProblemKind::Completion) {
    const BoolTensor mask = gen_mask(spec.dims, axis2, derive_seed(trial_seed, 1));
    const DenseTensor observed = project(truth, mask);
    return solver == SolverKind::Tctv ? complete_tctv(observed, mask, cfg, &truth)
                                      : complete_tnn(observed, mask, cfg, &truth);
  }
  CorruptionSpec corr;
  corr.ratio = axis2;
  corr.seed = derive_seed(trial_seed, 2);
  const DenseTensor corruption = gen_sparse_corruption(corr, spec.dims);
  const DenseTensor observed = add(truth, corruption);
  return solver == SolverKind::Tctv ? rpca_tctv(observed, cfg, &truth, &corruption)
                                    : rpca_tnn(observed, cfg, &truth, &corruption);
}

}  // namespace

std::vector<PhaseCell> run_phase_grid(const PhaseGridSpec& spec) {
  spec.validate();
  struct CellJob {
    SolverKind solver;
    std::size_t rank_idx;
    std::size_t axis_idx;
  };
  std::vector<CellJob> jobs;
  for (SolverKind solver : spec.solvers)
    for (std::size_t ri = 0; ri < spec.ranks.size(); ++ri)
      for (std::size_t ai = 0; ai < spec.axis2.size(); ++ai) jobs.push_back({solver, ri, ai});

  std::vector<PhaseCell> cells(jobs.size());
  parallel_for(static_cast<std::int64_t>(jobs.size()), [&](std::int64_t j) {
    const CellJob& job = jobs[static_cast<std::size_t>(j)];
    PhaseCell& cell = cells[static_cast<std::size_t>(j)];
    cell.problem = to_string(spec.problem);
    cell.solver = to_string(job.solver);
    cell.rank = spec.ranks[job.rank_idx];
    cell.axis2 = spec.axis2[job.axis_idx];
    cell.trials = spec.trials;
    try {
      double err_sum = 0.0;
      for (int trial = 0; trial < spec.trials; ++trial) {
        // Instance seeds ignore the solver so baselines face the same data.
        const std::uint64_t trial_seed = derive_seed(
            spec.seed, (job.rank_idx * spec.axis2.size() + job.axis_idx) * 1000003ULL,
            static_cast<std::uint64_t>(trial));
        SynthSpec synth;
        synth.dims = spec.dims;
        synth.rank = cell.rank;
        synth.regions = spec.regions;
        synth.transform = spec.solver_cfg.transform;
        synth.seed = derive_seed(trial_seed, 0);
        const DenseTensor truth = gen_lowrank_smooth(synth);
        const RecoveryReport rep =
            run_trial(spec, job.solver, cell.rank, cell.axis2, trial_seed, truth);
        const double err = rep.rel_err.value_or(1.0);
        err_sum += err;
        if (err < spec.success_rel_err) ++cell.successes;
      }
      cell.mean_rel_err = err_sum / spec.trials;
      cell.success = cell.mean_rel_err < spec.success_rel_err;
    } catch (const std::exception& e) {
      cell.error = e.what();
      cell.successes = 0;
      cell.mean_rel_err = 1.0;
      cell.success = false;
    }
  });
  return cells;
}

std::string phase_csv(const std::vector<PhaseCell>& cells) {
  std::string out = "# schema: tctv-phase-grid/v1\n";
  out += "problem,solver,rank,axis2,trials,successes,success_fraction,mean_rel_err,success,error\n";
  char buf[256];
  for (const PhaseCell& c : cells) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%lld,%.10g,%d,%d,%.10g,%.10g,%d,%s\n",
                  c.problem.c_str(), c.solver.c_str(), static_cast<long long>(c.rank), c.axis2,
                  c.trials, c.successes,
                  c.trials > 0 ? static_cast<double>(c.successes) / c.trials : 0.0,
                  c.mean_rel_err, c.success ? 1 : 0, c.error.c_str());
    out += buf;
  }
  return out;
}

}  // namespace tctv

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tctv/solver.hpp"
#include "tctv/synthesis.hpp"

namespace tctv {

enum class ProblemKind : std::uint8_t { Completion = 0, Rpca = 1 };
std::string to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& name);

/// Phase-transition experiment: for each (solver, rank, axis2) cell, run
/// `trials` seeded recoveries and record per-trial successes and the mean
/// relative error. axis2 is the sampling rate for completion and the
/// corruption ratio for robust PCA. Ground-truth instances depend on
/// (seed, rank, axis2, trial) only, so every solver sees identical inputs.
struct PhaseGridSpec {
  ProblemKind problem = ProblemKind::Completion;
  std::vector<SolverKind> solvers = {SolverKind::Tctv, SolverKind::Tnn};
  Shape dims;
  std::vector<std::int64_t> ranks;
  std::vector<double> axis2;
  int trials = 5;
  double success_rel_err = 0.05;
  std::int64_t regions = 25;
  std::uint64_t seed = 0;
  AdmmConfig solver_cfg;

  void validate() const;
};

struct PhaseCell {
  std::string problem;
  std::string solver;
  std::int64_t rank = 0;
  double axis2 = 0;
  int trials = 0;
  int successes = 0;          // trials with rel_err below the threshold
  double mean_rel_err = 0;
  bool success = false;       // mean rel_err below the threshold
  std::string error;          // per-cell failure record; run continues
};

// Cells execute on the worker pool, each with its own derived RNG stream;
// the returned order is deterministic (solver-major, then rank, then axis2).
std::vector<PhaseCell> run_phase_grid(const PhaseGridSpec& spec);

// Versioned CSV emission (schema `tctv-phase-grid/v1`).
std::string phase_csv(const std::vector<PhaseCell>& cells);

}  // namespace tctv

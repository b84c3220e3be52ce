#include "tctv/report.hpp"

#include <cmath>

#include <json.hpp>

namespace tctv {

namespace {

using json = nlohmann::ordered_json;

json finite_or_string(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

std::string report_json(const RecoveryReport& report, bool include_timing) {
  json j;
  j["schema"] = "tctv-report/v1";
  j["solver"] = report.solver;
  j["transform"] = report.transform;
  j["scale_factor"] = report.scale_factor;
  j["shape"] = report.recovered.shape().dims();
  j["iterations"] = report.iterations;
  j["converged"] = report.converged;
  j["final_residual"] = report.final_residual;
  j["estimated_rank"] = report.estimated_rank;
  if (report.estimated_sparsity) j["estimated_sparsity"] = *report.estimated_sparsity;
  if (report.lambda_used) j["lambda"] = *report.lambda_used;
  if (report.rel_err) j["rel_err"] = *report.rel_err;
  if (report.rel_err_sparse) j["rel_err_sparse"] = *report.rel_err_sparse;
  if (report.incoherence) {
    json inc;
    inc["mu"] = report.incoherence->mu;
    inc["mu_standard"] = report.incoherence->mu_standard;
    inc["mu_joint"] = report.incoherence->mu_joint;
    inc["rank"] = report.incoherence->rank;
    inc["sampling_bound"] = report.incoherence->sampling_bound;
    j["incoherence"] = inc;
  }
  j["residual_trace"] = report.residual_trace;
  if (include_timing) j["wall_seconds"] = report.wall_seconds;
  return j.dump(2) + "\n";
}

std::string metrics_json(const MetricReport& report) {
  json j;
  j["schema"] = "tctv-metrics/v1";
  j["rel_err"] = finite_or_string(report.rel_err);
  j["psnr"] = finite_or_string(report.psnr);
  j["mssim"] = finite_or_string(report.mssim);
  j["ergas"] = finite_or_string(report.ergas);
  j["estimated_rank"] = report.estimated_rank;
  j["estimated_sparsity"] = report.estimated_sparsity;
  return j.dump(2) + "\n";
}

}  // namespace tctv

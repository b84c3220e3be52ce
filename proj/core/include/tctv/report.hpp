#pragma once

#include <string>

#include "tctv/metrics.hpp"
#include "tctv/solver.hpp"

namespace tctv {

// JSON text for a recovery report (schema `tctv-report/v1`). Tensor payloads
// are not embedded; they travel as TNSR files. Wall-clock timing is volatile
// and only included on request so that seeded reruns emit byte-identical
// artifacts.
std::string report_json(const RecoveryReport& report, bool include_timing = false);

// JSON text for a metric report (schema `tctv-metrics/v1`). Non-finite values
// (e.g. PSNR of identical inputs) serialize as strings ("inf").
std::string metrics_json(const MetricReport& report);

}  // namespace tctv

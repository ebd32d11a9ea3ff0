#pragma once

#include <string>

#include "asymcc/optimal_f.hpp"
#include "asymcc/triple_check.hpp"

namespace asymcc {

/// Schema tag stamped into every JSON report this library emits.
inline constexpr int kReportSchemaVersion = 1;

/// Certification report as a JSON document: alpha, rho, step,
/// triangles_checked, min_margin, and the witness triangle under "argmin"
/// with its signature string. An infinite margin (a slack constraint failed
/// outright) serializes as the string "-inf" since JSON numbers cannot carry
/// it. Output is deterministic byte for byte.
std::string cert_report_json(const CertReport& report, Topology mode);

/// Factor-search summary as a JSON document: alpha, A_opt, A_thm, h, the
/// re-certification margin, and whether re-certification passed.
std::string optf_summary_json(const OptFResult& result);

}  // namespace asymcc

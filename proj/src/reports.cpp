#include "asymcc/reports.hpp"

#include <cmath>

#include <json.hpp>

namespace asymcc {

namespace {

using ordered_json = nlohmann::ordered_json;

void put_margin(ordered_json& j, const char* key, double value) {
  if (std::isfinite(value))
    j[key] = value;
  else
    j[key] = value < 0 ? "-inf" : "inf";
}

}  // namespace

std::string cert_report_json(const CertReport& report, Topology mode) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["alpha"] = report.alpha;
  j["rho"] = report.rho;
  j["step"] = report.step;
  j["mode"] = to_string(mode);
  j["triangles_checked"] = report.triangles_checked;
  put_margin(j, "min_margin", report.min_margin);
  j["argmin"] = {{"x1", report.argmin_x[0]},
                 {"x2", report.argmin_x[1]},
                 {"x3", report.argmin_x[2]},
                 {"sigma", signature_string(report.argmin_sigma)}};
  j["pass"] = report.pass();
  return j.dump(2) + "\n";
}

std::string optf_summary_json(const OptFResult& result) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["alpha"] = result.alpha;
  j["A_opt"] = result.a_opt;
  j["A_thm"] = result.a_thm;
  j["h"] = result.h;
  put_margin(j, "margin", result.margin);
  j["certified"] = result.certified;
  return j.dump(2) + "\n";
}

}  // namespace asymcc

#include "mdlb/verification.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

namespace mdlb {

CheckPart& VerificationReport::add_part(std::string name, double margin, double tolerance, std::string detail,
                                        bool informational) {
  CheckPart p;
  p.name = std::move(name);
  p.worst_margin = margin + 0.0;  // folds -0 into +0
  p.tolerance = tolerance;
  p.passed = margin >= -tolerance;
  p.informational = informational;
  p.detail = std::move(detail);
  parts.push_back(std::move(p));
  finalize();
  return parts.back();
}

void VerificationReport::finalize() {
  worst_margin = std::numeric_limits<double>::infinity();
  passed = true;
  for (const auto& p : parts) {
    if (p.informational) continue;
    worst_margin = std::min(worst_margin, p.worst_margin);
    passed = passed && p.passed;
  }
}

std::string VerificationReport::to_json(bool include_runtime) const {
  nlohmann::ordered_json j;
  j["check"] = check;
  j["passed"] = passed;
  j["worst_margin"] = worst_margin;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : parameters) params[k] = v;
  j["parameters"] = params;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& p : parts) {
    arr.push_back({{"name", p.name},
                   {"worst_margin", p.worst_margin},
                   {"tolerance", p.tolerance},
                   {"passed", p.passed},
                   {"informational", p.informational},
                   {"detail", p.detail}});
  }
  j["parts"] = arr;
  j["notes"] = notes;
  if (include_runtime) j["runtime_seconds"] = runtime_seconds;
  return j.dump(2) + "\n";
}

std::string VerificationReport::to_text(bool include_runtime) const {
  std::ostringstream out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", worst_margin);
  out << check << ": " << (passed ? "PASS" : "FAIL") << " (worst margin " << buf;
  if (include_runtime) {
    std::snprintf(buf, sizeof buf, "%.3f", runtime_seconds);
    out << ", " << buf << " s";
  }
  out << ")\n";
  if (!parameters.empty()) {
    out << "  parameters:";
    for (const auto& [k, v] : parameters) {
      std::snprintf(buf, sizeof buf, "%.6g", v);
      out << ' ' << k << '=' << buf;
    }
    out << '\n';
  }
  for (const auto& p : parts) {
    std::snprintf(buf, sizeof buf, "%.6g", p.worst_margin);
    out << "  [" << (p.informational ? "INFO" : (p.passed ? "PASS" : "FAIL")) << "] " << p.name << ": margin "
        << buf;
    std::snprintf(buf, sizeof buf, "%.0e", p.tolerance);
    out << " (tol " << buf << ")";
    if (!p.detail.empty()) out << "  " << p.detail;
    out << '\n';
  }
  for (const auto& n : notes) out << "  note: " << n << '\n';
  return out.str();
}

}  // namespace mdlb

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mdlb {

/// One inequality family inside a check. Passes iff worst_margin >= -tolerance.
struct CheckPart {
  std::string name;
  double worst_margin = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  bool informational = false;  // reported, never gates the check
  std::string detail;          // where the worst margin occurred
};

struct VerificationReport {
  std::string check;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<CheckPart> parts;
  std::vector<std::string> notes;
  double worst_margin = 0.0;  // over gating parts
  bool passed = false;
  double runtime_seconds = 0.0;

  /// Adds a part and sets its pass flag from margin and tolerance.
  CheckPart& add_part(std::string name, double margin, double tolerance, std::string detail = {},
                      bool informational = false);
  /// Recomputes worst_margin and passed from the gating parts.
  void finalize();

  /// Runtime is left out unless asked for, so reruns are byte-identical.
  std::string to_json(bool include_runtime = false) const;
  std::string to_text(bool include_runtime = false) const;
};

}  // namespace mdlb

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mdlb::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,         // usage, config or schema error
  kExitCheckFailed = 2,   // a verification check failed
  kExitDiverged = 3,      // training produced non-finite values
};

inline const std::vector<std::string> kSuites{"all", "hd", "priors", "bucket", "l1", "covering", "geometric"};

struct VerifyOptions {
  std::string suite = "all";
  std::uint64_t seed = 0;
  std::filesystem::path out = "mdlb-out/verify";
  std::optional<std::filesystem::path> config;
};

struct TrainOptions {
  std::filesystem::path config;
  std::filesystem::path out = "mdlb-out/train";
  std::optional<std::uint64_t> seed;
  std::optional<double> beta;
  std::optional<std::string> objective;
};

struct BoundReportOptions {
  std::filesystem::path checkpoint;
  std::optional<std::filesystem::path> train;
  std::optional<std::filesystem::path> ghost;
  std::filesystem::path out = "mdlb-out/bound-report";
  double delta = 0.05;
  double epsilon = 0.0;
  std::optional<double> lambda;
  int samples = 12;
  std::uint64_t seed = 0;
};

struct CoveringSimOptions {
  std::optional<std::filesystem::path> config;
  std::filesystem::path out = "mdlb-out/covering-sim";
  std::optional<std::uint64_t> seed;
};

int cmd_verify(const VerifyOptions& options, std::ostream& out);
int cmd_train(const TrainOptions& options, std::ostream& out);
int cmd_bound_report(const BoundReportOptions& options, std::ostream& out);
int cmd_covering_sim(const CoveringSimOptions& options, std::ostream& out);

/// Parses argv and dispatches; errors go to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mdlb::cli

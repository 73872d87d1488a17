#include "mdlb/oracle_sim.hpp"
#include "mdlb/rng.hpp"
#include "mdlb_cli/commands.hpp"
#include "mdlb_cli/config.hpp"
#include "mdlb_cli/output.hpp"

#include <algorithm>
#include <functional>
#include <ostream>

namespace mdlb::cli {
namespace {

struct VerifySettings {
  std::uint64_t seed = 0;
  int hd_resolution = 400;
  long long l1_trials = 100000;
  int prior_tables = 100;
  long long discrete_draws = 10000;
  int covering_seeds = 20;
  long long covering_trials = 500;
};

struct L1Case {
  int k;
  int n;
  double lambda;
  std::vector<double> labels;
};

std::vector<VerificationReport> run_suite(const std::string& suite, const VerifySettings& s) {
  std::vector<std::function<VerificationReport()>> jobs;
  const bool all = suite == "all";
  if (all || suite == "hd") {
    jobs.emplace_back([&] { return verify_hd_lemma(s.hd_resolution, s.seed); });
    jobs.emplace_back([] { return verify_exp_hd_sum(10, 14); });
    jobs.emplace_back([] { return verify_gallager(200); });
  }
  if (all || suite == "priors") {
    jobs.emplace_back([&] { return verify_symmetric_prior_identities(s.prior_tables, s.seed); });
    jobs.emplace_back([&] { return verify_discrete_expectation_bound(static_cast<std::size_t>(s.discrete_draws), s.seed); });
  }
  if (all || suite == "bucket") {
    jobs.emplace_back([] { return verify_bucket(100, 30); });
    jobs.emplace_back([] { return verify_bucket_asymptotics(10, 2, 1, {10, 50, 250}); });
  }
  if (all || suite == "l1") {
    static const std::vector<L1Case> cases{
        {2, 100, 10.0, {}}, {5, 200, 50.0, {0.6, 0.1, 0.1, 0.1, 0.1}}, {2, 50, 20.0, {}}};
    for (std::size_t i = 0; i < cases.size(); ++i) {
      jobs.emplace_back([&s, i] {
        const auto& c = cases[i];
        auto r = verify_l1_empiric(c.k, c.n, c.lambda, static_cast<std::size_t>(s.l1_trials), sub_seed(s.seed, i),
                                   c.labels);
        r.check += "_k" + std::to_string(c.k) + "_n" + std::to_string(c.n) + "_lambda" +
                   std::to_string(static_cast<int>(c.lambda));
        return r;
      });
    }
  }
  if (all || suite == "covering") {
    jobs.emplace_back([&] {
      return verify_covering_monotonicity(s.covering_seeds, static_cast<std::size_t>(s.covering_trials), s.seed);
    });
  }
  if (all || suite == "geometric") jobs.emplace_back([] { return verify_geometric_demo(); });

  std::vector<VerificationReport> reports;
  for (auto& job : jobs) reports.push_back(job());
  return reports;
}

}  // namespace

int cmd_verify(const VerifyOptions& options, std::ostream& out) {
  if (std::find(kSuites.begin(), kSuites.end(), options.suite) == kSuites.end()) {
    throw ConfigError("unknown suite '" + options.suite + "'");
  }
  VerifySettings s;
  s.seed = options.seed;
  OutputDir dir(options.out, "verify --suite " + options.suite);
  if (options.config) {
    const auto file = load_config(*options.config);
    Section root(file.root, "");
    if (root.has("seed")) s.seed = static_cast<std::uint64_t>(root.get_int("seed", 0));
    s.hd_resolution = static_cast<int>(root.get_int("hd-resolution", s.hd_resolution));
    s.l1_trials = root.get_int("l1-trials", s.l1_trials);
    s.prior_tables = static_cast<int>(root.get_int("prior-tables", s.prior_tables));
    s.discrete_draws = root.get_int("discrete-draws", s.discrete_draws);
    s.covering_seeds = static_cast<int>(root.get_int("covering-seeds", s.covering_seeds));
    s.covering_trials = root.get_int("covering-trials", s.covering_trials);
    root.finish();
    if (s.l1_trials < 2 || s.discrete_draws < 2 || s.covering_trials < 1) {
      throw ConfigError("trial and draw counts must be positive");
    }
    dir.set_config(*options.config, file.text);
  }
  dir.set_seed(s.seed);

  const auto reports = run_suite(options.suite, s);
  std::string summary;
  bool all_passed = true;
  for (const auto& r : reports) {
    dir.write(r.check + ".json", r.to_json());
    dir.write(r.check + ".txt", r.to_text());
    summary += r.check + (r.passed ? " PASS\n" : " FAIL\n");
    all_passed = all_passed && r.passed;
    out << r.to_text(true);
  }
  dir.write("summary.txt", summary);
  dir.finish();
  out << (all_passed ? "all checks passed" : "some checks FAILED") << " (" << reports.size() << " reports in "
      << options.out.string() << ")\n";
  return all_passed ? kExitOk : kExitCheckFailed;
}

}  // namespace mdlb::cli

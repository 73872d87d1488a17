#include "mdlb/oracle_sim.hpp"
#include "mdlb_cli/commands.hpp"
#include "mdlb_cli/config.hpp"
#include "mdlb_cli/output.hpp"
#include "mdlb_cli/svg.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace mdlb::cli {
namespace {

struct CoveringPlan {
  CoveringSource source = memorizer_source();
  CoveringOptions options;
  std::vector<double> rates;
  std::string source_name = "memorizer";
};

DiscreteConditional read_table(const std::filesystem::path& base, const std::string& file, const char* key) {
  const auto path = base / file;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(std::string(key) + ": cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return DiscreteConditional::from_json(ss.str());
  } catch (const std::exception& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

CoveringPlan read_plan(const std::optional<ConfigFile>& file, const CoveringSimOptions& o) {
  CoveringPlan p;
  const auto root_json = file ? file->root : nlohmann::json::object();
  Section root(root_json, "");
  p.options.seed = static_cast<std::uint64_t>(root.get_int("seed", 0));
  p.options.blocks = static_cast<int>(root.get_int("blocks", p.options.blocks));
  p.options.trials = static_cast<std::size_t>(root.get_int("trials", static_cast<long long>(p.options.trials)));
  const auto mode = root.get_string("mode", "lossless");
  if (mode == "lossless") {
    p.options.mode = CoverMode::lossless;
  } else if (mode == "lossy") {
    p.options.mode = CoverMode::lossy;
  } else {
    throw ConfigError("mode must be lossless or lossy, got '" + mode + "'");
  }
  p.options.epsilon = root.get_double("epsilon", p.options.epsilon);
  const auto arrangement = root.get_string("arrangement", "J");
  if (arrangement == "J" || arrangement == "j") {
    p.options.arrangement = ArrangementKind::J;
  } else if (arrangement == "T" || arrangement == "t") {
    p.options.arrangement = ArrangementKind::T;
  } else {
    throw ConfigError("arrangement must be J or T, got '" + arrangement + "'");
  }
  p.options.explicit_codebook = root.get_bool("explicit-codebook", false);

  p.source_name = root.get_string("source", "memorizer");
  if (p.source_name == "tables") {
    const auto base = file ? file->path.parent_path() : std::filesystem::path{};
    auto truth = read_table(base, root.get_string("truth-file", ""), "truth-file");
    auto prior = read_table(base, root.get_string("prior-file", ""), "prior-file");
    auto labels = root.get_doubles("label-dist", {});
    p.source = CoveringSource{std::move(labels), std::move(truth), std::move(prior)};
  } else if (p.source_name != "memorizer") {
    throw ConfigError("source must be memorizer or tables, got '" + p.source_name + "'");
  }

  const bool listed = root.has("rates");
  p.rates = root.get_doubles("rates", {});
  const double lo = root.get_double("rate-min", 0.0);
  const double hi = root.get_double("rate-max", 1.5);
  const auto count = root.get_int("rate-count", 7);
  if (!listed) {
    if (count < 1 || !(hi >= lo) || lo < 0.0) throw ConfigError("need 0 <= rate-min <= rate-max and rate-count >= 1");
    p.rates = rate_sweep(lo, hi, static_cast<int>(count));
  }
  root.finish();
  if (o.seed) p.options.seed = *o.seed;
  if (p.options.blocks < 1) throw ConfigError("blocks must be >= 1");
  if (p.options.trials < 1) throw ConfigError("trials must be >= 1");
  if (p.rates.empty()) throw ConfigError("rates must not be empty");
  return p;
}

}  // namespace

int cmd_covering_sim(const CoveringSimOptions& options, std::ostream& out) {
  std::optional<ConfigFile> file;
  if (options.config) file = load_config(*options.config);
  auto plan = read_plan(file, options);

  CoverageCurve curve;
  try {
    curve = covering_simulation(plan.source, plan.options, plan.rates);
  } catch (const std::length_error& e) {
    throw ConfigError(std::string("codebook too large: ") + e.what());
  }

  OutputDir dir(options.out, "covering-sim");
  if (file) dir.set_config(file->path, file->text);
  dir.set_seed(plan.options.seed);
  dir.write("coverage.csv", curve.to_csv());

  Series cov{"coverage", {}, {}, {}, {}};
  for (const auto& pt : curve.points) {
    cov.x.push_back(pt.rate);
    cov.y.push_back(pt.coverage);
    cov.lower.push_back(std::max(0.0, pt.coverage - 2.0 * pt.std_error));
    cov.upper.push_back(std::min(1.0, pt.coverage + 2.0 * pt.std_error));
  }
  const double top = plan.rates.back();
  Series kl{"KL", {curve.kl, curve.kl}, {0.0, 1.0}, {}, {}};
  Series ce{"cross-entropy rate", {curve.cross_entropy_rate, curve.cross_entropy_rate}, {0.0, 1.0}, {}, {}};
  Panel panel{"coverage (" + plan.source_name + ", m = " + std::to_string(plan.options.blocks) + ")",
              "rate (nats per block)", "coverage", {cov}};
  if (curve.kl <= top) panel.series.push_back(kl);
  if (curve.cross_entropy_rate <= top && curve.cross_entropy_rate != curve.kl) panel.series.push_back(ce);
  dir.write("coverage.svg", line_chart({panel}));
  dir.finish();

  char buf[128];
  std::snprintf(buf, sizeof buf, "KL %.6f nats, cross-entropy rate %.6f nats\n", curve.kl, curve.cross_entropy_rate);
  out << buf;
  out << "rate      codebook  coverage  stderr\n";
  for (const auto& pt : curve.points) {
    std::snprintf(buf, sizeof buf, "%-9.4f %-9zu %-9.4f %.4f\n", pt.rate, pt.codebook_size, pt.coverage, pt.std_error);
    out << buf;
  }
  return kExitOk;
}

}  // namespace mdlb::cli

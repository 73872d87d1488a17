#include "mdlb_cli/commands.hpp"
#include "mdlb_cli/config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <ostream>

namespace mdlb::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Description-length generalization bounds: verification, training and reports", "mdlb"};
  app.require_subcommand(1);

  VerifyOptions verify;
  auto* v = app.add_subcommand("verify", "Run oracle checks and write verification reports");
  v->add_option("--suite", verify.suite, "all, hd, priors, bucket, l1, covering or geometric");
  v->add_option("--seed", verify.seed, "Master seed");
  v->add_option("--out", verify.out, "Output directory");
  v->add_option("--config", verify.config, "Optional TOML/JSON overrides");

  TrainOptions train;
  auto* t = app.add_subcommand("train", "Train VIB / CDVIB models from a config");
  t->add_option("--config", train.config, "TOML or JSON config")->required();
  t->add_option("--out", train.out, "Output directory");
  t->add_option("--seed", train.seed, "Override the config seed");
  t->add_option("--beta", train.beta, "Override train.beta");
  t->add_option("--objective", train.objective, "vib, cdvib-lossless or cdvib-lossy");

  BoundReportOptions report;
  auto* b = app.add_subcommand("bound-report", "Evaluate every bound for a checkpoint");
  b->add_option("checkpoint", report.checkpoint, "checkpoint.json written by train")->required();
  b->add_option("--train", report.train, "Training set CSV (default: regenerate from the checkpoint)");
  b->add_option("--ghost", report.ghost, "Ghost set CSV");
  b->add_option("--out", report.out, "Output directory");
  b->add_option("--delta", report.delta, "Confidence level of the tail bounds");
  b->add_option("--epsilon", report.epsilon, "Distortion slack added to the bounds");
  b->add_option("--lambda", report.lambda, "Fixed lambda for the representation tail bound");
  b->add_option("--samples", report.samples, "Latent draws per input for the risks");
  b->add_option("--seed", report.seed, "Seed of the risk evaluation");

  CoveringSimOptions covering;
  auto* c = app.add_subcommand("covering-sim", "Monte Carlo covering of prediction blocks");
  c->add_option("--config", covering.config, "TOML or JSON config (default: memorizer source)");
  c->add_option("--out", covering.out, "Output directory");
  c->add_option("--seed", covering.seed, "Override the config seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*v) {
      if (std::find(kSuites.begin(), kSuites.end(), verify.suite) == kSuites.end()) {
        err << "error: unknown suite '" << verify.suite << "'\n" << v->help();
        return kExitUsage;
      }
      return cmd_verify(verify, out);
    }
    if (*t) return cmd_train(train, out);
    if (*b) return cmd_bound_report(report, out);
    return cmd_covering_sim(covering, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitUsage;
}

}  // namespace mdlb::cli

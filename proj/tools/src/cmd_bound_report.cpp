#include "mdlb/bounds.hpp"
#include "mdlb/trainer.hpp"
#include "mdlb_cli/commands.hpp"
#include "mdlb_cli/config.hpp"
#include "mdlb_cli/data_config.hpp"
#include "mdlb_cli/output.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace mdlb::cli {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Dataset load_dataset(const std::filesystem::path& path, int classes, int dim) {
  Dataset d;
  try {
    d = read_csv(path, classes);
  } catch (const std::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  if (d.dim() != dim) {
    throw ConfigError(path.string() + ": " + std::to_string(d.dim()) + " features, checkpoint expects " +
                      std::to_string(dim));
  }
  return d;
}

}  // namespace

int cmd_bound_report(const BoundReportOptions& o, std::ostream& out) {
  if (o.train.has_value() != o.ghost.has_value()) throw ConfigError("--train and --ghost must be given together");
  Checkpoint ck;
  try {
    ck = checkpoint_from_json(read_file(o.checkpoint));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(o.checkpoint.string() + ": " + e.what());
  }
  const auto shape = ck.model.shape();

  Dataset train_set, ghost_set;
  if (o.train) {
    train_set = load_dataset(*o.train, shape.classes, shape.input_dim);
    ghost_set = load_dataset(*o.ghost, shape.classes, shape.input_dim);
  } else {
    std::uint64_t data_seed = 0;
    const auto data = data_from_json(nlohmann::json::parse(ck.data_json), data_seed);
    if (data.num_classes() != shape.classes || data.spec().dim != shape.input_dim) {
      throw ConfigError("checkpoint data description does not match the model shape");
    }
    auto split = synth_split(data.spec(), static_cast<std::size_t>(data.n_train),
                             static_cast<std::size_t>(data.n_test), data_seed);
    train_set = std::move(split.train);
    ghost_set = std::move(split.ghost);
  }
  if (train_set.size() != ghost_set.size()) {
    out << "note: train and ghost sizes differ (" << train_set.size() << " vs " << ghost_set.size()
        << "); n is the training size\n";
  }

  LatentKlEstimate kl;
  GapEstimate01 gap;
  try {
    kl = estimate_latent_kl(train_set, ghost_set, ck.model, ck.bank, ck.config.objective);
    gap = empirical_gap(ck.model, train_set, ghost_set, o.samples, o.seed);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("schema mismatch: ") + e.what());
  }

  BoundInputs in;
  in.n = train_set.size();
  in.num_classes = shape.classes;
  in.kl_term = kl.total;
  in.epsilon = o.epsilon;
  in.delta = o.delta;
  in.lambda = o.lambda;
  try {
    in.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  auto report = make_bound_report(in, gap.train_risk, gap.test_risk);
  report.kl_std_error = kl.total_std_error;
  report.seed = o.seed;
  report.objective = to_string(ck.config.objective);

  OutputDir dir(o.out, "bound-report");
  dir.set_config(o.checkpoint, read_file(o.checkpoint));
  dir.set_seed(o.seed);
  dir.write("bound_report.json", report.to_json());
  dir.write("bound_report.csv", BoundReport::csv_header() + report.csv_row());
  dir.finish();

  char buf[160];
  std::snprintf(buf, sizeof buf, "objective %s, n = %zu, K = %d, latent KL %.6g nats (stderr %.3g)\n",
                report.objective.c_str(), in.n, in.num_classes, kl.total, kl.total_std_error);
  out << buf;
  std::snprintf(buf, sizeof buf, "train risk %.4f, test risk %.4f, empirical gap %.4f\n", gap.train_risk,
                gap.test_risk, report.empirical_gap);
  out << buf;
  out << "bound                 value        VACUOUS\n";
  for (const auto& [name, value] : report.bound_fields()) {
    std::snprintf(buf, sizeof buf, "%-21s %-12.6g %s\n", name.c_str(), value, value >= 1.0 ? "yes" : "no");
    out << buf;
  }
  return kExitOk;
}

}  // namespace mdlb::cli

#include "mdlb/trainer.hpp"
#include "mdlb_cli/commands.hpp"
#include "mdlb_cli/config.hpp"
#include "mdlb_cli/data_config.hpp"
#include "mdlb_cli/output.hpp"
#include "mdlb_cli/svg.hpp"

#include <cstdio>
#include <ostream>

namespace mdlb::cli {
namespace {

constexpr int kBandMinSeeds = 3;

struct TrainPlan {
  DataConfig data;
  TrainConfig base;
  std::vector<Objective> objectives;
  int seeds = 1;
  std::uint64_t seed = 0;
};

TrainPlan read_plan(const ConfigFile& file, const TrainOptions& o) {
  TrainPlan p;
  Section root(file.root, "");
  p.seed = static_cast<std::uint64_t>(root.get_int("seed", 0));
  auto data = root.section("data");
  p.data = read_data_config(data);

  auto model = root.section("model");
  p.base.hidden = static_cast<int>(model.get_int("hidden", p.base.hidden));
  p.base.latent_dim = static_cast<int>(model.get_int("latent-dim", p.base.latent_dim));
  model.finish();

  auto t = root.section("train");
  std::vector<std::string> names = t.get_strings("objectives", {"vib"});
  p.base.beta = t.get_double("beta", p.base.beta);
  p.base.alpha = t.get_double("alpha", p.base.alpha);
  p.base.centers = static_cast<int>(t.get_int("centers", p.base.centers));
  p.base.batch_size = static_cast<int>(t.get_int("batch-size", p.base.batch_size));
  p.base.epochs = static_cast<int>(t.get_int("epochs", p.base.epochs));
  p.base.learning_rate = t.get_double("learning-rate", p.base.learning_rate);
  p.base.lr_decay = t.get_double("lr-decay", p.base.lr_decay);
  p.base.test_samples = static_cast<int>(t.get_int("test-samples", p.base.test_samples));
  p.seeds = static_cast<int>(t.get_int("seeds", 1));
  t.finish();
  root.finish();

  if (o.seed) p.seed = *o.seed;
  if (o.beta) p.base.beta = *o.beta;
  if (o.objective) names = {*o.objective};
  if (p.seeds < 1) throw ConfigError("train.seeds must be >= 1");
  for (const auto& n : names) {
    try {
      p.objectives.push_back(objective_from_string(n));
    } catch (const std::invalid_argument&) {
      throw ConfigError("unknown objective '" + n + "' (vib, cdvib-lossless, cdvib-lossy)");
    }
  }
  try {
    p.base.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("train: ") + e.what());
  }
  return p;
}

struct Curves {
  std::vector<double> epochs;
  std::vector<std::vector<double>> train_acc, test_acc, test_loglik;
};

void collect(Curves& c, const std::vector<HistoryRow>& history, double beta) {
  std::vector<double> epochs, tr, te, ll;
  for (const auto& row : history) {
    if (row.split == "train") {
      epochs.push_back(row.epoch);
      tr.push_back(row.accuracy);
    } else {
      te.push_back(row.accuracy);
      ll.push_back(-(row.loss - beta * row.mean_kl));
    }
  }
  // A diverged run stops early; pad with its last value so seeds align.
  if (!c.epochs.empty() && epochs.size() < c.epochs.size()) {
    while (tr.size() < c.epochs.size()) tr.push_back(tr.back()), te.push_back(te.back()), ll.push_back(ll.back());
    epochs = c.epochs;
  }
  if (c.epochs.empty() || epochs.size() > c.epochs.size()) c.epochs = epochs;
  c.train_acc.push_back(tr);
  c.test_acc.push_back(te);
  c.test_loglik.push_back(ll);
}

}  // namespace

int cmd_train(const TrainOptions& options, std::ostream& out) {
  const auto file = load_config(options.config);
  const auto plan = read_plan(file, options);
  OutputDir dir(options.out, "train");
  dir.set_config(options.config, file.text);
  dir.set_seed(plan.seed);

  const bool sweep = plan.objectives.size() > 1;
  const bool many = plan.seeds > 1;
  const bool band = plan.seeds >= kBandMinSeeds;
  bool diverged = false;
  std::vector<Curves> curves(plan.objectives.size());

  for (std::size_t oi = 0; oi < plan.objectives.size(); ++oi) {
    for (int k = 0; k < plan.seeds; ++k) {
      const std::uint64_t seed = plan.seed + static_cast<std::uint64_t>(k);
      auto cfg = plan.base;
      cfg.objective = plan.objectives[oi];
      cfg.seed = seed;
      const auto split = synth_split(plan.data.spec(), static_cast<std::size_t>(plan.data.n_train),
                                     static_cast<std::size_t>(plan.data.n_test), seed);
      const auto result = train(cfg, split.train, &split.ghost);

      std::string suffix;
      if (sweep) suffix += "_" + to_string(cfg.objective);
      if (many) suffix += "_seed" + std::to_string(seed);
      dir.write("history" + suffix + ".csv", history_csv(result.history));
      Checkpoint ck{result.model, result.bank, cfg, data_to_json(plan.data, seed).dump()};
      dir.write("checkpoint" + suffix + ".json", to_json(ck));
      collect(curves[oi], result.history, cfg.beta);

      const auto& last = result.history.back();
      char buf[160];
      std::snprintf(buf, sizeof buf, "%-15s seed %-6llu epochs %-4d final test accuracy %.4f%s\n",
                    to_string(cfg.objective).c_str(), static_cast<unsigned long long>(seed), last.epoch,
                    last.accuracy, result.diverged ? "  DIVERGED" : "");
      out << buf;
      if (result.diverged) {
        out << "  " << result.message << '\n';
        diverged = true;
      }
    }
  }

  if (sweep) {
    Panel acc{"test accuracy", "epoch", "accuracy", {}};
    Panel ll{"test log-likelihood", "epoch", "log-likelihood (nats)", {}};
    for (std::size_t oi = 0; oi < plan.objectives.size(); ++oi) {
      const auto name = to_string(plan.objectives[oi]);
      acc.series.push_back(aggregate(name, curves[oi].epochs, curves[oi].test_acc, band));
      ll.series.push_back(aggregate(name, curves[oi].epochs, curves[oi].test_loglik, band));
    }
    dir.write("comparison.svg", line_chart({acc, ll}));
  } else {
    Panel acc{"accuracy (" + to_string(plan.objectives[0]) + ")", "epoch", "accuracy", {}};
    acc.series.push_back(aggregate("train", curves[0].epochs, curves[0].train_acc, band));
    acc.series.push_back(aggregate("test", curves[0].epochs, curves[0].test_acc, band));
    dir.write("accuracy.svg", line_chart({acc}));
  }
  dir.finish();
  return diverged ? kExitDiverged : kExitOk;
}

}  // namespace mdlb::cli

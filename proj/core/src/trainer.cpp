#include "mdlb/trainer.hpp"

#include "mdlb/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mdlb {
namespace {

constexpr const char* kCheckpointFormat = "mdlb-checkpoint";
constexpr int kCheckpointVersion = 1;

enum Stream : std::uint64_t { kInit = 0, kShuffle = 1, kNoise = 2, kEvalTrain = 3, kEvalTest = 4 };

Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = normal(rng);
  }
  return out;
}

nlohmann::json tensor_json(const double* data, Eigen::Index size, Eigen::Index rows, Eigen::Index cols) {
  return {{"shape", {rows, cols}}, {"data", std::vector<double>(data, data + size)}};
}

}  // namespace

void TrainConfig::validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be >= 0");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
  if (centers < 1) throw std::invalid_argument("centers must be >= 1");
  if (latent_dim < 1 || hidden < 1) throw std::invalid_argument("latent-dim and hidden must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("batch-size must be >= 1");
  if (alpha * batch_size > 1.0 + 1e-12) {
    throw std::invalid_argument("alpha * batch-size must not exceed 1 (moving-average weights turn negative)");
  }
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning-rate must be > 0");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0)) throw std::invalid_argument("lr-decay must lie in (0, 1]");
  if (test_samples < 1) throw std::invalid_argument("test-samples must be >= 1");
}

Evaluation evaluate(const Model& model, const PriorBank& bank, Objective objective, double beta,
                    const Dataset& data, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("evaluate: samples must be >= 1");
  data.validate();
  Evaluation ev;
  if (data.size() == 0) return ev;
  const ModelShape shape = model.shape();
  std::mt19937_64 rng(seed);
  ev.prob_correct.reserve(data.size());
  ev.regularizer.reserve(data.size());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int y = data.labels[i];
    const DiagGaussian g = encoder_forward(model.encoder, data.features.row(static_cast<Eigen::Index>(i)).transpose());
    const Eigen::MatrixXd noise = normal_matrix(shape.latent, samples, rng);
    Eigen::VectorXd avg = Eigen::VectorXd::Zero(shape.classes);
    for (int s = 0; s < samples; ++s) avg += decoder_forward(model.decoder, sample_latent(g, noise.col(s)));
    avg /= static_cast<double>(samples);
    Eigen::Index arg = 0;
    avg.maxCoeff(&arg);
    if (arg == y) ++correct;
    const double reg = sample_regularizer(objective, g, y, bank).value;
    ev.prob_correct.push_back(avg(y));
    ev.regularizer.push_back(reg);
    ev.mean_cross_entropy -= std::log(std::max(avg(y), 1e-300));
    ev.mean_kl += reg;
  }
  const double n = static_cast<double>(data.size());
  ev.accuracy = static_cast<double>(correct) / n;
  ev.mean_cross_entropy /= n;
  ev.mean_kl /= n;
  ev.loss = beta * ev.mean_kl + ev.mean_cross_entropy;
  return ev;
}

TrainResult train(const TrainConfig& config, const Dataset& train_set, const Dataset* test_set) {
  config.validate();
  train_set.validate();
  if (train_set.size() == 0) throw std::invalid_argument("train: empty training set");
  const ModelShape shape{static_cast<int>(train_set.dim()), config.hidden, config.latent_dim,
                         train_set.num_classes};
  TrainResult result{Model::xavier(shape, sub_seed(config.seed, kInit)),
                     PriorBank(shape.classes, config.centers, config.latent_dim, config.alpha,
                               bank_mode_for(config.objective)),
                     {}, false, {}};

  auto record = [&](int epoch) {
    const auto ev = evaluate(result.model, result.bank, config.objective, config.beta, train_set,
                             config.test_samples, sub_seed(config.seed, kEvalTrain + 8 * epoch));
    result.history.push_back({epoch, "train", ev.accuracy, ev.loss, ev.mean_kl});
    if (test_set != nullptr && test_set->size() > 0) {
      const auto et = evaluate(result.model, result.bank, config.objective, config.beta, *test_set,
                               config.test_samples, sub_seed(config.seed, kEvalTest + 8 * epoch));
      result.history.push_back({epoch, "test", et.accuracy, et.loss, et.mean_kl});
    }
  };
  record(0);

  std::mt19937_64 shuffle_rng(sub_seed(config.seed, kShuffle));
  std::mt19937_64 noise_rng(sub_seed(config.seed, kNoise));
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  const auto b = static_cast<std::size_t>(config.batch_size);
  double lr = config.learning_rate;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (std::size_t start = 0; start < order.size(); start += b) {
      const std::span<const std::size_t> batch(order.data() + start, std::min(b, order.size() - start));
      const Eigen::MatrixXd noise = normal_matrix(config.latent_dim, static_cast<Eigen::Index>(batch.size()), noise_rng);
      try {
        const auto step = objective(result.model, result.bank, config.objective, config.beta, train_set, batch, noise);
        Model next = result.model;
        next.add_scaled(step.gradient, -lr);
        if (!next.all_finite()) throw std::runtime_error("non-finite parameters after the update");
        result.model = std::move(next);
        if (config.objective != Objective::vib) {
          std::vector<BankSample> samples;
          samples.reserve(batch.size());
          for (std::size_t i = 0; i < batch.size(); ++i) {
            samples.push_back({train_set.labels[batch[i]], step.centers[i], &step.encodings[i]});
          }
          update_bank(result.bank, samples);
        }
      } catch (const std::runtime_error& e) {
        result.diverged = true;
        result.message = "diverged at epoch " + std::to_string(epoch) + ": " + e.what();
        return result;
      }
    }
    lr *= config.lr_decay;
    try {
      record(epoch);
    } catch (const std::runtime_error& e) {
      result.diverged = true;
      result.message = "diverged at epoch " + std::to_string(epoch) + ": " + e.what();
      return result;
    }
  }
  return result;
}

std::string history_csv(const std::vector<HistoryRow>& history) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "epoch,split,accuracy,loss,mean_kl\n";
  for (const auto& r : history) {
    out << r.epoch << ',' << r.split << ',' << r.accuracy << ',' << r.loss << ',' << r.mean_kl << '\n';
  }
  return out.str();
}

std::string to_json(const Checkpoint& c) {
  nlohmann::json j;
  j["format"] = kCheckpointFormat;
  j["version"] = kCheckpointVersion;
  const ModelShape s = c.model.shape();
  j["shape"] = {{"input_dim", s.input_dim}, {"hidden", s.hidden}, {"latent", s.latent}, {"classes", s.classes}};
  auto& tensors = j["tensors"] = nlohmann::json::object();
  const Model& m = c.model;
  tensors["encoder.w1"] = tensor_json(m.encoder.w1.data(), m.encoder.w1.size(), m.encoder.w1.rows(), m.encoder.w1.cols());
  tensors["encoder.b1"] = tensor_json(m.encoder.b1.data(), m.encoder.b1.size(), m.encoder.b1.size(), 1);
  tensors["encoder.w_mu"] = tensor_json(m.encoder.w_mu.data(), m.encoder.w_mu.size(), m.encoder.w_mu.rows(), m.encoder.w_mu.cols());
  tensors["encoder.b_mu"] = tensor_json(m.encoder.b_mu.data(), m.encoder.b_mu.size(), m.encoder.b_mu.size(), 1);
  tensors["encoder.w_logvar"] = tensor_json(m.encoder.w_logvar.data(), m.encoder.w_logvar.size(), m.encoder.w_logvar.rows(), m.encoder.w_logvar.cols());
  tensors["encoder.b_logvar"] = tensor_json(m.encoder.b_logvar.data(), m.encoder.b_logvar.size(), m.encoder.b_logvar.size(), 1);
  tensors["decoder.w"] = tensor_json(m.decoder.w.data(), m.decoder.w.size(), m.decoder.w.rows(), m.decoder.w.cols());
  tensors["decoder.b"] = tensor_json(m.decoder.b.data(), m.decoder.b.size(), m.decoder.b.size(), 1);

  const auto& bank = c.bank;
  nlohmann::json centers = nlohmann::json::array();
  for (int k = 0; k < bank.num_classes(); ++k) {
    for (int r = 0; r < bank.centers_per_class(); ++r) {
      const auto& g = bank.center(k, r);
      centers.push_back({{"class", k}, {"index", r},
                         {"mean", std::vector<double>(g.mean.data(), g.mean.data() + g.mean.size())},
                         {"var", std::vector<double>(g.var.data(), g.var.data() + g.var.size())}});
    }
  }
  j["bank"] = {{"classes", bank.num_classes()}, {"centers_per_class", bank.centers_per_class()},
               {"latent_dim", bank.latent_dim()}, {"alpha", bank.alpha()},
               {"mode", bank.mode() == BankMode::lossless ? "lossless" : "lossy"}, {"centers", centers}};
  const auto& cfg = c.config;
  j["config"] = {{"objective", to_string(cfg.objective)}, {"beta", cfg.beta}, {"alpha", cfg.alpha},
                 {"centers", cfg.centers}, {"latent_dim", cfg.latent_dim}, {"hidden", cfg.hidden},
                 {"batch_size", cfg.batch_size}, {"epochs", cfg.epochs}, {"learning_rate", cfg.learning_rate},
                 {"lr_decay", cfg.lr_decay}, {"seed", cfg.seed}, {"test_samples", cfg.test_samples}};
  j["data"] = nlohmann::json::parse(c.data_json);
  return j.dump(1);
}

Checkpoint checkpoint_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("checkpoint: ") + e.what());
  }
  try {
    if (j.at("format") != kCheckpointFormat || j.at("version") != kCheckpointVersion) {
      throw std::invalid_argument("checkpoint: unsupported format or version");
    }
    const auto& js = j.at("shape");
    const ModelShape shape{js.at("input_dim").get<int>(), js.at("hidden").get<int>(), js.at("latent").get<int>(),
                           js.at("classes").get<int>()};
    Checkpoint c;
    c.model = Model::zeros(shape);
    const auto& tensors = j.at("tensors");
    c.model.for_each_tensor([&](const char* name, double* data, Eigen::Index size) {
      const auto values = tensors.at(name).at("data").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(values.size()) != size) {
        throw std::invalid_argument(std::string("checkpoint: tensor ") + name + " has the wrong size");
      }
      std::copy(values.begin(), values.end(), data);
    });

    const auto& jb = j.at("bank");
    const auto mode = jb.at("mode").get<std::string>();
    if (mode != "lossless" && mode != "lossy") throw std::invalid_argument("checkpoint: unknown bank mode");
    c.bank = PriorBank(jb.at("classes").get<int>(), jb.at("centers_per_class").get<int>(),
                       jb.at("latent_dim").get<int>(), jb.at("alpha").get<double>(),
                       mode == "lossless" ? BankMode::lossless : BankMode::lossy);
    for (const auto& e : jb.at("centers")) {
      auto& g = c.bank.center(e.at("class").get<int>(), e.at("index").get<int>());
      const auto mean = e.at("mean").get<std::vector<double>>();
      const auto var = e.at("var").get<std::vector<double>>();
      if (static_cast<int>(mean.size()) != c.bank.latent_dim() || var.size() != mean.size()) {
        throw std::invalid_argument("checkpoint: center has the wrong dimension");
      }
      g.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
      g.var = Eigen::Map<const Eigen::VectorXd>(var.data(), static_cast<Eigen::Index>(var.size()));
    }

    const auto& jc = j.at("config");
    c.config.objective = objective_from_string(jc.at("objective").get<std::string>());
    c.config.beta = jc.at("beta").get<double>();
    c.config.alpha = jc.at("alpha").get<double>();
    c.config.centers = jc.at("centers").get<int>();
    c.config.latent_dim = jc.at("latent_dim").get<int>();
    c.config.hidden = jc.at("hidden").get<int>();
    c.config.batch_size = jc.at("batch_size").get<int>();
    c.config.epochs = jc.at("epochs").get<int>();
    c.config.learning_rate = jc.at("learning_rate").get<double>();
    c.config.lr_decay = jc.at("lr_decay").get<double>();
    c.config.seed = jc.at("seed").get<std::uint64_t>();
    c.config.test_samples = jc.at("test_samples").get<int>();
    if (c.bank.latent_dim() != shape.latent || c.bank.num_classes() != shape.classes) {
      throw std::invalid_argument("checkpoint: bank does not match the model shape");
    }
    c.data_json = j.value("data", nlohmann::json::object()).dump();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("checkpoint: ") + e.what());
  }
}

}  // namespace mdlb

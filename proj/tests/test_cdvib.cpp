#include "mdlb/dataset.hpp"
#include "mdlb/model.hpp"
#include "mdlb/objective.hpp"
#include "mdlb/prior_bank.hpp"
#include "mdlb/rng.hpp"
#include "mdlb/trainer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

using namespace mdlb;

namespace {

Dataset toy_data(int n, int d_in, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Dataset d;
  d.num_classes = k;
  d.features.resize(n, d_in);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d_in; ++j) d.features(i, j) = normal(rng);
    d.labels.push_back(i % k);
  }
  return d;
}

Eigen::MatrixXd toy_noise(int m, int b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd e(m, b);
  for (Eigen::Index i = 0; i < e.size(); ++i) e.data()[i] = normal(rng);
  return e;
}

// Bank whose centers sit away from the origin, so regularizer gradients are not trivial.
PriorBank shifted_bank(int k, int centers, int m, BankMode mode, std::uint64_t seed) {
  PriorBank bank(k, centers, m, 0.01, mode);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int c = 0; c < k; ++c) {
    for (int r = 0; r < centers; ++r) {
      auto& g = bank.center(c, r);
      for (int j = 0; j < m; ++j) {
        g.mean(j) = 2.0 * r + u(rng);
        g.var(j) = std::exp(0.5 * u(rng));
      }
    }
  }
  return bank;
}

}  // namespace

TEST(Encoder, ZeroParametersGiveStandardNormal) {
  const auto m = Model::zeros({3, 4, 2, 3});
  const auto g = encoder_forward(m.encoder, Eigen::Vector3d(1.0, -2.0, 0.5));
  EXPECT_TRUE(g.mean.isZero());
  EXPECT_TRUE(g.var.isOnes());
}

TEST(Encoder, HandComputedChain) {
  auto m = Model::zeros({1, 1, 1, 2});
  m.encoder.w1(0, 0) = 2.0;
  m.encoder.b1(0) = -1.0;
  m.encoder.w_mu(0, 0) = 3.0;
  m.encoder.b_mu(0) = 1.0;
  m.encoder.w_logvar(0, 0) = 1.0;
  // a = 2 * 0.25 - 1 = -0.5, h = -0.05, mu = 0.85, log var = -0.05
  const auto g = encoder_forward(m.encoder, Eigen::VectorXd::Constant(1, 0.25));
  EXPECT_NEAR(g.mean(0), 0.85, 1e-15);
  EXPECT_NEAR(g.var(0), std::exp(-0.05), 1e-15);
  EXPECT_THROW(encoder_forward(m.encoder, Eigen::Vector2d(1.0, 2.0)), std::invalid_argument);
}

TEST(Encoder, IdenticalInputsIdenticalOutputs) {
  const auto m = Model::xavier({3, 5, 2, 3}, 4);
  const Eigen::Vector3d x(0.3, -0.1, 2.0);
  const auto a = encoder_forward(m.encoder, x);
  const auto b = encoder_forward(m.encoder, x);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.var, b.var);
}

TEST(SampleLatent, Reparameterization) {
  DiagGaussian g{Eigen::Vector2d(1.0, -1.0), Eigen::Vector2d(4.0, 0.25)};
  EXPECT_EQ(sample_latent(g, Eigen::Vector2d::Zero()), g.mean);
  EXPECT_TRUE(sample_latent(g, Eigen::Vector2d(1.0, 2.0)).isApprox(Eigen::Vector2d(3.0, 0.0)));
  const auto s = DiagGaussian::standard(2);
  EXPECT_EQ(sample_latent(s, Eigen::Vector2d(0.3, 0.7)), Eigen::Vector2d(0.3, 0.7));
  EXPECT_THROW(sample_latent(g, Eigen::Vector3d::Zero()), std::invalid_argument);
}

TEST(Decoder, SoftmaxSumsToOne) {
  const auto m = Model::xavier({2, 4, 3, 5}, 9);
  const auto p = decoder_forward(m.decoder, Eigen::Vector3d(10.0, -3.0, 0.5));
  EXPECT_NEAR(p.sum(), 1.0, 1e-12);
  EXPECT_TRUE((p.array() >= 0.0).all());
}

TEST(AssignCenter, NearestByKl) {
  PriorBank bank(1, 2, 1, 0.1);
  bank.center(0, 1).mean(0) = 2.0;
  DiagGaussian g{Eigen::VectorXd::Constant(1, 0.5), Eigen::VectorXd::Ones(1)};
  EXPECT_EQ(assign_center(g, 0, bank), 0);
  EXPECT_NEAR(bank.regularizer(g, 0, 0), 0.125, 1e-15);
  EXPECT_NEAR(bank.regularizer(g, 0, 1), 1.125, 1e-15);
  PriorBank single(2, 1, 1, 0.1);
  EXPECT_EQ(assign_center(g, 1, single), 0);
}

TEST(AssignCenter, ExactMatchAndTiesAndMinimality) {
  auto bank = shifted_bank(3, 4, 2, BankMode::lossy, 12);
  const auto target = bank.center(1, 2);
  EXPECT_EQ(assign_center(target, 1, bank), 2);
  EXPECT_NEAR(bank.regularizer(target, 1, 2), 0.0, 1e-15);

  PriorBank tie(1, 3, 1, 0.1);
  EXPECT_EQ(assign_center(DiagGaussian::standard(1), 0, tie), 0);

  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto mode : {BankMode::lossless, BankMode::lossy}) {
    const auto b = shifted_bank(2, 5, 3, mode, 5);
    for (int t = 0; t < 50; ++t) {
      DiagGaussian g{Eigen::Vector3d(normal(rng), normal(rng), normal(rng)),
                     Eigen::Vector3d(std::exp(normal(rng)), std::exp(normal(rng)), std::exp(normal(rng)))};
      const int k = t % 2;
      const int r = assign_center(g, k, b);
      for (int o = 0; o < 5; ++o) EXPECT_LE(b.regularizer(g, k, r), b.regularizer(g, k, o));
    }
  }
}

TEST(UpdateBank, MovingAverage) {
  DiagGaussian enc{Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, 4.0)};
  PriorBank bank(2, 1, 1, 0.1);
  const BankSample s{0, 0, &enc};
  update_bank(bank, std::span(&s, 1));
  EXPECT_NEAR(bank.center(0, 0).mean(0), 0.1, 1e-15);
  EXPECT_NEAR(bank.center(0, 0).var(0), 0.9 + 0.4, 1e-15);
  EXPECT_EQ(bank.center(1, 0).mean(0), 0.0);
  EXPECT_EQ(bank.center(1, 0).var(0), 1.0);

  PriorBank full(1, 1, 1, 1.0);
  update_bank(full, std::span(&s, 1));
  EXPECT_EQ(full.center(0, 0).mean(0), 1.0);
  EXPECT_EQ(full.center(0, 0).var(0), 4.0);

  PriorBank frozen(1, 1, 1, 0.0);
  update_bank(frozen, std::span(&s, 1));
  EXPECT_EQ(frozen.center(0, 0).mean(0), 0.0);

  PriorBank over(1, 1, 1, 0.6);
  const BankSample two[] = {s, s};
  EXPECT_THROW(update_bank(over, two), std::invalid_argument);
}

TEST(UpdateBank, VariancesStayPositive) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal(0.0, 1.0);
  PriorBank bank(2, 2, 3, 0.05);
  std::vector<DiagGaussian> encs;
  for (int i = 0; i < 20; ++i) {
    encs.push_back({Eigen::Vector3d(normal(rng), normal(rng), normal(rng)),
                    Eigen::Vector3d::Constant(std::exp(-10.0 + normal(rng)))});
  }
  std::vector<BankSample> batch;
  for (int i = 0; i < 20; ++i) batch.push_back({i % 2, (i / 2) % 2, &encs[static_cast<std::size_t>(i)]});
  for (int step = 0; step < 200; ++step) update_bank(bank, batch);
  for (int k = 0; k < 2; ++k) {
    for (int r = 0; r < 2; ++r) EXPECT_TRUE((bank.center(k, r).var.array() > 0.0).all());
  }
}

TEST(Objective, ZeroDecoderGivesLogK) {
  const auto data = toy_data(5, 3, 3, 1);
  const auto model = Model::zeros({3, 4, 2, 3});
  const PriorBank bank(3, 1, 2, 0.1);
  const std::vector<std::size_t> idx{0, 1, 2, 3, 4};
  const auto r = objective(model, bank, Objective::vib, 0.0, data, idx, toy_noise(2, 5, 2));
  EXPECT_NEAR(r.loss, std::log(3.0), 1e-15);
  EXPECT_NEAR(r.mean_regularizer, 0.0, 1e-15);
}

TEST(Objective, LosslessWithFrozenSingleCenterEqualsVib) {
  const auto data = toy_data(5, 3, 3, 3);
  const auto model = Model::xavier({3, 4, 2, 3}, 7);
  const PriorBank bank(3, 1, 2, 0.0);
  const std::vector<std::size_t> idx{0, 1, 2, 3, 4};
  const auto noise = toy_noise(2, 5, 4);
  const auto vib = objective(model, bank, Objective::vib, 0.3, data, idx, noise);
  const auto cd = objective(model, bank, Objective::cdvib_lossless, 0.3, data, idx, noise);
  EXPECT_EQ(vib.loss, cd.loss);
}

TEST(Objective, BankModeMustMatch) {
  const auto data = toy_data(5, 3, 3, 3);
  const auto model = Model::xavier({3, 4, 2, 3}, 7);
  const PriorBank bank(3, 1, 2, 0.0, BankMode::lossless);
  const std::vector<std::size_t> idx{0};
  EXPECT_THROW(objective(model, bank, Objective::cdvib_lossy, 0.3, data, idx, toy_noise(2, 1, 1)),
               std::invalid_argument);
}

TEST(Objective, LossyRegularizerNonNegativeAndZeroAtCenter) {
  const auto bank = shifted_bank(2, 2, 3, BankMode::lossy, 21);
  const auto& c = bank.center(1, 1);
  EXPECT_NEAR(lossy_regularizer(c, c), 0.0, 1e-15);
  DiagGaussian off{c.mean.array() + 0.3, c.var * 1.5};
  EXPECT_GT(lossy_regularizer(off, c), 0.0);
}

TEST(Objective, GradientsMatchFiniteDifferences) {
  const auto data = toy_data(5, 3, 3, 11);
  const auto model = Model::xavier({3, 4, 2, 3}, 13);
  const std::vector<std::size_t> idx{0, 1, 2, 3, 4};
  const auto noise = toy_noise(2, 5, 17);
  for (auto obj : {Objective::vib, Objective::cdvib_lossless, Objective::cdvib_lossy}) {
    const auto bank = shifted_bank(3, 2, 2, bank_mode_for(obj), 19);
    for (const auto& e : gradient_check(model, bank, obj, 0.7, data, idx, noise)) {
      EXPECT_LT(e.relative_error, 1e-4) << to_string(obj) << " " << e.name;
    }
  }
}

TEST(Objective, NamesRoundTrip) {
  for (auto obj : {Objective::vib, Objective::cdvib_lossless, Objective::cdvib_lossy}) {
    EXPECT_EQ(objective_from_string(to_string(obj)), obj);
  }
  EXPECT_EQ(objective_from_string("cdvib-lossy"), Objective::cdvib_lossy);
  EXPECT_THROW(objective_from_string("adam"), std::invalid_argument);
}

TEST(Dataset, GeneratorBasics) {
  const auto spec = GeneratorSpec::two_blobs(2.0);
  EXPECT_EQ(synth_dataset(spec, 0, 1).size(), 0u);
  const auto a = synth_dataset(spec, 4000, 5);
  const auto b = synth_dataset(spec, 4000, 5);
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.labels, b.labels);
  for (int k = 0; k < 2; ++k) {
    Eigen::Vector2d sum = Eigen::Vector2d::Zero();
    int count = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a.labels[i] != k) continue;
      sum += a.features.row(static_cast<Eigen::Index>(i)).transpose();
      ++count;
    }
    const Eigen::Vector2d mean = sum / count;
    EXPECT_LT((mean - spec.means[static_cast<std::size_t>(k)]).cwiseAbs().maxCoeff(), 3.0 / std::sqrt(count));
  }
  const auto split = synth_split(spec, 100, 100, 5);
  EXPECT_NE(split.train.features, split.ghost.features);
}

TEST(Dataset, BayesAccuracyClosedForms) {
  EXPECT_NEAR(two_blobs_bayes_accuracy(2.0, 1.0), 0.977249868051821, 1e-12);
  const double r = four_corners_ratio_for_accuracy(0.85);
  EXPECT_NEAR(four_corners_bayes_accuracy(r, 1.0), 0.85, 1e-12);
  EXPECT_NEAR(r, 1.418341422938678, 1e-10);  // scipy norm.ppf(sqrt(0.85))
}

TEST(Dataset, CsvRoundTrip) {
  const auto d = synth_dataset(GeneratorSpec::rings(3, 0.1), 20, 3);
  const auto back = from_csv(to_csv(d), 3);
  EXPECT_EQ(back.labels, d.labels);
  EXPECT_EQ(back.features, d.features);
  EXPECT_THROW(from_csv("x0,label\n0.5,7\n", 3), std::invalid_argument);
}

TEST(Train, ZeroEpochsKeepsInitialization) {
  const auto data = synth_dataset(GeneratorSpec::two_blobs(2.0), 50, 1);
  TrainConfig cfg;
  cfg.epochs = 0;
  cfg.seed = 4;
  const auto r = train(cfg, data);
  const auto init = Model::xavier(r.model.shape(), sub_seed(cfg.seed, 0));
  EXPECT_EQ(r.model.encoder.w1, init.encoder.w1);
  EXPECT_EQ(r.model.decoder.w, init.decoder.w);
  EXPECT_EQ(r.history.size(), 1u);
  EXPECT_FALSE(r.diverged);
}

TEST(Train, SameSeedSameHistory) {
  const auto split = synth_split(GeneratorSpec::two_blobs(2.0), 200, 100, 3);
  TrainConfig cfg;
  cfg.objective = Objective::cdvib_lossy;
  cfg.epochs = 3;
  cfg.centers = 2;
  cfg.seed = 9;
  const auto a = train(cfg, split.train, &split.ghost);
  const auto b = train(cfg, split.train, &split.ghost);
  EXPECT_EQ(history_csv(a.history), history_csv(b.history));
  EXPECT_EQ(a.history.size(), 8u);
}

TEST(Train, ConfigValidation) {
  TrainConfig cfg;
  cfg.beta = -1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = TrainConfig{};
  cfg.alpha = 0.1;
  cfg.batch_size = 64;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Train, DivergenceStopsWithFiniteState) {
  const auto data = synth_dataset(GeneratorSpec::two_blobs(2.0), 100, 1);
  TrainConfig cfg;
  cfg.learning_rate = 1e8;
  cfg.epochs = 5;
  const auto r = train(cfg, data);
  EXPECT_TRUE(r.diverged);
  EXPECT_TRUE(r.model.all_finite());
}

TEST(Train, SeparableBlobsReachBayesLevel) {
  // Bayes accuracy is Phi(2) = 0.9772; allow three binomial standard errors.
  const auto data = synth_dataset(GeneratorSpec::two_blobs(2.0), 500, 21);
  const double bayes = two_blobs_bayes_accuracy(2.0, 1.0);
  const double floor = bayes - 3.0 * std::sqrt(bayes * (1.0 - bayes) / 500.0);
  for (auto obj : {Objective::vib, Objective::cdvib_lossless, Objective::cdvib_lossy}) {
    TrainConfig cfg;
    cfg.objective = obj;
    cfg.beta = 1e-3;
    cfg.epochs = 30;
    cfg.seed = 1;
    const auto r = train(cfg, data);
    ASSERT_FALSE(r.diverged);
    EXPECT_GE(r.history.back().accuracy, floor) << to_string(obj);
  }
}

TEST(Checkpoint, JsonRoundTrip) {
  Checkpoint c;
  c.model = Model::xavier({2, 3, 2, 2}, 5);
  c.bank = shifted_bank(2, 2, 2, BankMode::lossy, 3);
  c.config.objective = Objective::cdvib_lossy;
  c.config.seed = 77;
  c.data_json = R"({"generator":"two-blobs"})";
  const auto back = checkpoint_from_json(to_json(c));
  EXPECT_EQ(back.model.encoder.w_mu, c.model.encoder.w_mu);
  EXPECT_EQ(back.bank.center(1, 1).var, c.bank.center(1, 1).var);
  EXPECT_EQ(back.bank.mode(), BankMode::lossy);
  EXPECT_EQ(back.config.seed, 77u);
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_THROW(checkpoint_from_json("{}"), std::invalid_argument);
}

#include "mdlb/oracle_sim.hpp"
#include "mdlb/symmetry.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <numbers>

using namespace mdlb;

namespace {

const CheckPart& part(const VerificationReport& r, const std::string& prefix) {
  for (const auto& p : r.parts) {
    if (p.name.rfind(prefix, 0) == 0) return p;
  }
  throw std::runtime_error("missing part " + prefix);
}

DiscreteConditional point_mass(std::size_t column) {
  DiscreteConditional q(1, 2, 2);
  for (std::size_t y = 0; y < q.rows(); ++y) q.at(y, column) = 1.0;
  q.validate();
  return q;
}

}  // namespace

TEST(Report, PassFlagFollowsGatingParts) {
  VerificationReport r;
  r.check = "demo";
  r.add_part("ok", 0.0, 1e-12);
  EXPECT_TRUE(r.passed);
  r.add_part("info", -5.0, 0.0, {}, true);
  EXPECT_TRUE(r.passed);
  r.add_part("bad", -1e-6, 1e-9);
  EXPECT_FALSE(r.passed);
  EXPECT_DOUBLE_EQ(r.worst_margin, -1e-6);
  r.runtime_seconds = 1.25;
  EXPECT_EQ(r.to_json().find("runtime"), std::string::npos);
  EXPECT_NE(r.to_json(true).find("runtime"), std::string::npos);
  EXPECT_NE(r.to_text().find("[FAIL] bad"), std::string::npos);
  EXPECT_NE(r.to_text().find("[INFO] info"), std::string::npos);
}

TEST(HdProperties, PassesOnDefaultGrid) {
  const auto r = verify_hd_lemma(400);
  EXPECT_TRUE(r.passed) << r.to_text();
  EXPECT_GE(r.worst_margin, -1e-12);
  EXPECT_LT(r.runtime_seconds, 2.0);
  const auto& nats = part(r, "(ii) h_D(x,0) >= x [nats]");
  EXPECT_TRUE(nats.informational);
  EXPECT_LT(nats.worst_margin, -0.07);
  EXPECT_THROW(verify_hd_lemma(99), std::invalid_argument);
}

TEST(ExpHdSum, ClosedFormValues) {
  EXPECT_NEAR(exp_hd_sum(10, 20), 1.0, 1e-12);
  EXPECT_NEAR(exp_hd_sum(10, 1), 2.05335518938765, 1e-12);
  EXPECT_NEAR(exp_hd_sum(10, 10), 15.9558032184158, 1e-11);
  EXPECT_NEAR(exp_hd_sum(14, 14), 19.5661525003519, 1e-11);
  EXPECT_THROW(exp_hd_sum(10, 21), std::invalid_argument);
}

TEST(ExpHdSum, ReportsTheMiddleTermsExceedingN) {
  const auto r = verify_exp_hd_sum(9, 14);
  EXPECT_FALSE(r.passed);
  EXPECT_TRUE(part(r, "sum <= n for n=9").informational);
  const auto& ten = part(r, "sum <= n for n=10");
  EXPECT_NEAR(ten.worst_margin, 1.0 - 15.9558032184158 / 10.0, 1e-12);
  EXPECT_NE(ten.detail.find("V=10"), std::string::npos);
  EXPECT_LT(r.runtime_seconds, 5.0);
}

TEST(Gallager, HoldsUpTo200) {
  const auto r = verify_gallager(200);
  EXPECT_TRUE(r.passed) << r.to_text();
  EXPECT_LT(r.runtime_seconds, 1.0);
}

TEST(BucketCheck, VandermondeAndBmax) {
  const auto r = verify_bucket(100, 30);
  EXPECT_TRUE(r.passed) << r.to_text();
  EXPECT_THROW(verify_bucket(100, 31), std::invalid_argument);
}

TEST(BucketAsymptotics, ConvergesToHd) {
  const auto r = verify_bucket_asymptotics(10, 2, 1, {10, 50, 250});
  EXPECT_TRUE(r.passed) << r.to_text();
  EXPECT_LE(0.05 - part(r, "error at largest m").worst_margin, 0.05);
  EXPECT_THROW(verify_bucket_asymptotics(10, 15, 6, {10}), std::invalid_argument);
  EXPECT_THROW(verify_bucket_asymptotics(10, 2, 1, {200000}), std::invalid_argument);
}

TEST(BucketAsymptotics, SymmetricSplitHasZeroExponent) {
  // a + b = 2t: the dominant term sits at h_D = 0.
  const auto r = verify_bucket_asymptotics(10, 2, 0, {10, 100});
  EXPECT_TRUE(r.passed) << r.to_text();
}

TEST(L1Empiric, ZeroLambda) {
  const auto r = verify_l1_empiric(3, 50, 0.0, 1000, 1);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(part(r, "log-MGF point estimate").detail, "estimate=0.000000");
}

TEST(L1Empiric, MatchesExactBinaryMgf) {
  const auto r = verify_l1_empiric(2, 100, 10.0, 20000, 4);
  EXPECT_TRUE(r.passed) << r.to_text();
  const double estimate = 8.0 - part(r, "log-MGF point estimate").worst_margin;
  EXPECT_NEAR(estimate, 1.60910074948194, 0.05);
  EXPECT_THROW(verify_l1_empiric(2, 100, 68.0, 100, 0), std::invalid_argument);
  EXPECT_THROW(verify_l1_empiric(2, 100, 1.0, 100, 0, {0.3, 0.3}), std::invalid_argument);
}

TEST(L1Empiric, IndependentOfThreadCount) {
  setenv("MDLB_THREADS", "1", 1);
  const auto one = verify_l1_empiric(5, 200, 50.0, 5000, 9, {0.6, 0.1, 0.1, 0.1, 0.1});
  setenv("MDLB_THREADS", "4", 1);
  const auto four = verify_l1_empiric(5, 200, 50.0, 5000, 9, {0.6, 0.1, 0.1, 0.1, 0.1});
  unsetenv("MDLB_THREADS");
  EXPECT_EQ(one.to_json(), four.to_json());
  EXPECT_TRUE(one.passed);
}

TEST(PriorIdentities, HoldOnRandomTables) {
  const auto r = verify_symmetric_prior_identities(20, 3);
  EXPECT_TRUE(r.passed) << r.to_text();
  EXPECT_LT(part(r, "type-II infimum vs I(T; Yhat | Y), arbitrary").worst_margin, -1e-3);
}

TEST(DiscreteBound, ThresholdLearner) {
  const auto r = verify_discrete_expectation_bound(2000, 5);
  EXPECT_TRUE(r.passed) << r.to_text();
}

TEST(Covering, CodebookSize) {
  EXPECT_EQ(codebook_size(0.0, 8), 1u);
  EXPECT_EQ(codebook_size(std::numbers::ln2, 8), 256u);
  EXPECT_EQ(codebook_size(std::log(3.0) / 2.0, 2), 3u);
  EXPECT_THROW(codebook_size(2.0, 8), std::length_error);
  EXPECT_THROW(codebook_size(-0.1, 8), std::invalid_argument);
}

TEST(Covering, PointMassCoveredAtZeroRate) {
  const CoveringSource s{{0.5, 0.5}, point_mass(3), point_mass(3)};
  CoveringOptions o;
  o.trials = 50;
  const std::vector<double> rates{0.0};
  const auto c = covering_simulation(s, o, rates);
  EXPECT_EQ(c.points[0].coverage, 1.0);
  EXPECT_EQ(c.kl, 0.0);
}

TEST(Covering, ZeroPriorMassNeverCovers) {
  const CoveringSource s{{0.5, 0.5}, point_mass(3), point_mass(0)};
  CoveringOptions o;
  o.trials = 50;
  const std::vector<double> rates{0.0, 1.0};
  const auto c = covering_simulation(s, o, rates);
  EXPECT_EQ(c.points[0].coverage, 0.0);
  EXPECT_EQ(c.points[1].coverage, 0.0);
  EXPECT_TRUE(std::isinf(c.kl));
}

TEST(Covering, MemorizerRates) {
  const auto s = memorizer_source();
  CoveringOptions o;
  o.trials = 400;
  o.seed = 2;
  const auto rates = rate_sweep(0.2, 1.2, 6);
  const auto c = covering_simulation(s, o, rates);
  EXPECT_NEAR(c.kl, std::numbers::ln2, 1e-12);
  EXPECT_NEAR(c.cross_entropy_rate, std::numbers::ln2, 1e-12);
  for (std::size_t k = 1; k < c.points.size(); ++k) EXPECT_GE(c.points[k].coverage, c.points[k - 1].coverage);
  EXPECT_LT(c.points.front().coverage, 0.1);
  EXPECT_GT(c.points.back().coverage, 0.99);
  const auto csv = c.to_csv();
  EXPECT_EQ(csv.rfind("rate,codebook_size,coverage,stderr\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
}

TEST(Covering, ExplicitCodebookMatchesGeometricShortcut) {
  const auto s = memorizer_source();
  CoveringOptions o;
  o.trials = 600;
  o.seed = 8;
  const std::vector<double> rates{0.5, 0.7, 0.9};
  const auto fast = covering_simulation(s, o, rates);
  o.explicit_codebook = true;
  const auto slow = covering_simulation(s, o, rates);
  for (std::size_t k = 0; k < rates.size(); ++k) {
    const double se = std::hypot(fast.points[k].std_error, slow.points[k].std_error);
    EXPECT_NEAR(fast.points[k].coverage, slow.points[k].coverage, 4.0 * se + 1e-3) << k;
  }
}

TEST(Covering, LossyCoversAtLeastAsOftenAsExact) {
  const auto s = memorizer_source();
  CoveringOptions o;
  o.trials = 300;
  o.seed = 4;
  o.explicit_codebook = true;
  const std::vector<double> rates{0.0, 0.3, 0.6};
  const auto exact = covering_simulation(s, o, rates);
  o.mode = CoverMode::lossy;
  o.epsilon = 0.6;
  const auto lossy = covering_simulation(s, o, rates);
  for (std::size_t k = 0; k < rates.size(); ++k) EXPECT_GE(lossy.points[k].coverage, exact.points[k].coverage);
  EXPECT_GT(lossy.points[0].coverage, exact.points[0].coverage);
  o.mode = CoverMode::lossless;
  EXPECT_THROW(covering_simulation(s, o, rates), std::invalid_argument);
}

TEST(Covering, TypeTwoArrangement) {
  const auto base = memorizer_source();
  const CoveringSource s{base.label_dist, base.truth,
                         symmetrize(base.truth, {SymmetryKind::type2, 1, std::nullopt})};
  CoveringOptions o;
  o.arrangement = ArrangementKind::T;
  o.trials = 200;
  const std::vector<double> rates{1.2};
  EXPECT_GT(covering_simulation(s, o, rates).points[0].coverage, 0.99);
}

TEST(Covering, MonotonicityCheckPasses) {
  const auto r = verify_covering_monotonicity(20, 500, 7);
  EXPECT_TRUE(r.passed) << r.to_text();
  EXPECT_EQ(r.to_json(), verify_covering_monotonicity(20, 500, 7).to_json());
}

TEST(Geometric, DemoValues) {
  const auto d = geometric_compression_demo();
  EXPECT_NEAR(d.lossy_rate, std::numbers::ln2, 1e-15);
  EXPECT_NEAR(d.lossy_distortion, 0.05, 1e-12);
  EXPECT_NEAR(d.best_distortion, 0.025, 1e-12);
  ASSERT_EQ(d.lossless_mi.size(), 5u);
  EXPECT_NEAR(d.lossless_mi[0], 1.474056825273205, 1e-4);
  EXPECT_NEAR(d.lossless_mi[1], 2.615970679367808, 1e-3);
  for (std::size_t i = 1; i < d.lossless_mi.size(); ++i) EXPECT_GT(d.lossless_mi[i], d.lossless_mi[i - 1]);
  EXPECT_TRUE(verify_geometric_demo().passed);
  EXPECT_THROW(geometric_compression_demo({0.3}), std::invalid_argument);
}

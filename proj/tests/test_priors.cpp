#include "mdlb/discrete_learner.hpp"
#include "mdlb/rearrangement.hpp"
#include "mdlb/symmetry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace mdlb;

namespace {

DiscreteConditional random_table(int n, int k, int p, std::mt19937_64& rng) {
  DiscreteConditional q(n, k, p);
  std::gamma_distribution<double> g(0.7, 1.0);
  for (std::size_t r = 0; r < q.rows(); ++r) {
    double total = 0.0;
    for (auto& v : q.row(r)) total += (v = g(rng) + 1e-6);
    for (auto& v : q.row(r)) v /= total;
  }
  return q;
}

PermutationSpec spec(SymmetryKind kind, int n) { return {kind, n, std::nullopt}; }

// Prediction 1 at position 0 exactly when the label there is 1; elsewhere uniform.
DiscreteConditional position_one_table() {
  DiscreteConditional q(1, 2, 2);
  for (std::size_t r = 0; r < q.rows(); ++r) {
    const auto y = q.label_codec().decode(r);
    for (std::size_t c = 0; c < q.cols(); ++c) {
      const auto yh = q.pred_codec().decode(c);
      q.at(r, c) = yh[0] == y[0] ? 0.5 : 0.0;
    }
  }
  q.validate();
  return q;
}

}  // namespace

TEST(VectorCodec, RoundTripLittleEndian) {
  VectorCodec c(3, 3);
  EXPECT_EQ(c.size(), 27u);
  const std::vector<int> v{2, 0, 1};
  EXPECT_EQ(c.encode(v), 2u + 0u * 3u + 1u * 9u);
  EXPECT_EQ(c.decode(c.encode(v)), v);
  EXPECT_THROW(c.encode(std::vector<int>{3, 0, 0}), std::invalid_argument);
}

TEST(DiscreteConditional, ValidationAndLimits) {
  DiscreteConditional q(1, 2, 2);
  EXPECT_THROW(q.validate(), std::invalid_argument);
  EXPECT_THROW(DiscreteConditional(1, 2, 2, std::vector<double>(16, 0.5)), std::invalid_argument);
  EXPECT_THROW(DiscreteConditional(6, 2, 4), std::length_error);
}

TEST(DiscreteConditional, JsonRoundTrip) {
  std::mt19937_64 rng(3);
  const auto q = random_table(1, 2, 3, rng);
  const auto back = DiscreteConditional::from_json(q.to_json());
  ASSERT_TRUE(back.same_shape(q));
  for (std::size_t i = 0; i < q.table().size(); ++i) EXPECT_DOUBLE_EQ(back.table()[i], q.table()[i]);
}

TEST(PermutationGroups, Sizes) {
  EXPECT_EQ(type1_group(3).size(), 8u);
  EXPECT_EQ(full_group(3).size(), 720u);
  EXPECT_EQ(within_half_group(2).size(), 4u);
  EXPECT_EQ(label_stabilizer(std::vector<int>{0, 1, 0, 1}).size(), 4u);
  EXPECT_EQ(label_stabilizer(std::vector<int>{0, 0, 0, 1}).size(), 6u);
  EXPECT_THROW(full_group(4), std::length_error);
}

TEST(CheckSymmetry, UniformAndProductAreSymmetric) {
  for (auto kind : {SymmetryKind::type1, SymmetryKind::type2, SymmetryKind::type3}) {
    const auto u = check_symmetry(DiscreteConditional::uniform(2, 2, 3), spec(kind, 2));
    EXPECT_TRUE(u.symmetric);
    EXPECT_EQ(u.max_violation, 0.0);
    const auto prod = DiscreteConditional::product(2, {{0.7, 0.3}, {0.2, 0.8}});
    EXPECT_TRUE(check_symmetry(prod, spec(kind, 2)).symmetric);
  }
}

TEST(CheckSymmetry, PositionDependentTableIsNot) {
  DiscreteConditional q(1, 2, 2);
  for (std::size_t r = 0; r < q.rows(); ++r) {
    q.at(r, 1) = 0.9;  // yhat = (1, 0)
    q.at(r, 2) = 0.1;  // yhat = (0, 1)
  }
  const auto res = check_symmetry(q, spec(SymmetryKind::type1, 1));
  EXPECT_FALSE(res.symmetric);
  EXPECT_NEAR(res.max_violation, 0.8, 1e-15);
}

TEST(CheckSymmetry, Type3ChecksLabelPreservingPermutationsOnly) {
  // Depends on y jointly with yhat, so type1 fails but each row is invariant
  // under its own label stabilizer.
  const auto q = position_one_table();
  EXPECT_FALSE(check_symmetry(q, spec(SymmetryKind::type3, 1)).symmetric);
  PermutationSpec mixed{SymmetryKind::type3, 1, std::vector<int>{0, 1}};
  EXPECT_TRUE(check_symmetry(q, mixed).symmetric);
  PermutationSpec equal{SymmetryKind::type3, 1, std::vector<int>{1, 1}};
  EXPECT_FALSE(check_symmetry(q, equal).symmetric);
  EXPECT_TRUE(check_symmetry(symmetrize(q, equal), equal).symmetric);
}

TEST(CheckSymmetry, Mismatch) {
  EXPECT_THROW(check_symmetry(DiscreteConditional::uniform(1, 2, 2), spec(SymmetryKind::type1, 2)),
               std::invalid_argument);
}

TEST(Symmetrize, PointMassTypeOne) {
  DiscreteConditional q(1, 2, 2);
  for (std::size_t r = 0; r < q.rows(); ++r) q.at(r, 1) = 1.0;
  const auto s = symmetrize(q, spec(SymmetryKind::type1, 1));
  for (std::size_t r = 0; r < s.rows(); ++r) {
    EXPECT_DOUBLE_EQ(s(r, 1), 0.5);
    EXPECT_DOUBLE_EQ(s(r, 2), 0.5);
    EXPECT_DOUBLE_EQ(s(r, 0) + s(r, 3), 0.0);
  }
}

TEST(Symmetrize, TypeTwoMatchesBruteForceSwap) {
  std::mt19937_64 rng(11);
  const auto q = random_table(1, 3, 2, rng);
  const auto s = symmetrize(q, spec(SymmetryKind::type2, 1));
  for (int y0 = 0; y0 < 3; ++y0) {
    for (int y1 = 0; y1 < 3; ++y1) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const auto r = q.label_codec().encode(std::vector<int>{y0, y1});
          const auto rs = q.label_codec().encode(std::vector<int>{y1, y0});
          const auto c = q.pred_codec().encode(std::vector<int>{a, b});
          const auto cs = q.pred_codec().encode(std::vector<int>{b, a});
          EXPECT_NEAR(s(r, c), 0.5 * (q(r, c) + q(rs, cs)), 1e-15);
        }
      }
    }
  }
}

TEST(Symmetrize, IdempotentAndNormalized) {
  std::mt19937_64 rng(5);
  for (auto kind : {SymmetryKind::type1, SymmetryKind::type2, SymmetryKind::type3}) {
    const auto q = random_table(2, 2, 2, rng);
    const auto s = symmetrize(q, spec(kind, 2));
    EXPECT_NO_THROW(s.validate());
    EXPECT_TRUE(check_symmetry(s, spec(kind, 2)).symmetric);
    const auto ss = symmetrize(s, spec(kind, 2));
    for (std::size_t i = 0; i < s.table().size(); ++i) EXPECT_NEAR(ss.table()[i], s.table()[i], 1e-15);
  }
}

TEST(ConditionalMI, ConstantPredictorIsZero) {
  DiscreteConditional q(2, 2, 2);
  for (std::size_t r = 0; r < q.rows(); ++r) q.at(r, q.cols() - 1) = 1.0;
  const RearrangementJoint joint{{0.3, 0.7}, q};
  EXPECT_NEAR(conditional_mutual_information(joint, ArrangementKind::J), 0.0, 1e-15);
  EXPECT_NEAR(conditional_mutual_information(joint, ArrangementKind::T), 0.0, 1e-15);
}

TEST(ConditionalMI, RevealedTrainingPositionIsLn2) {
  // Outputs 1 on the training sample and 0 on the ghost sample.
  DiscreteConditional q(1, 2, 2);
  for (std::size_t r = 0; r < q.rows(); ++r) q.at(r, q.pred_codec().encode(std::vector<int>{1, 0})) = 1.0;
  const RearrangementJoint joint{{0.5, 0.5}, q};
  EXPECT_NEAR(conditional_mutual_information(joint, ArrangementKind::J), std::numbers::ln2, 1e-14);
  EXPECT_NEAR(infimum_kl_over_symmetric(q, joint.label_dist, spec(SymmetryKind::type1, 1)),
              std::numbers::ln2, 1e-14);
}

TEST(ConditionalMI, CopyingLabelsIsZero) {
  DiscreteConditional q(1, 2, 2);
  for (std::size_t r = 0; r < q.rows(); ++r) q.at(r, r) = 1.0;
  const RearrangementJoint joint{{0.4, 0.6}, q};
  EXPECT_NEAR(conditional_mutual_information(joint, ArrangementKind::J), 0.0, 1e-15);
  EXPECT_NEAR(conditional_mutual_information(joint, ArrangementKind::T), 0.0, 1e-15);
}

TEST(ConditionalMI, ArrangementCounts) {
  EXPECT_EQ(arrangements(ArrangementKind::J, 3).size(), 8u);
  EXPECT_EQ(arrangements(ArrangementKind::T, 3).size(), 20u);
  EXPECT_THROW(arrangements(ArrangementKind::T, 4), std::length_error);
}

TEST(InfimumKl, EqualsJInformationForArbitraryTables) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 2;
    const auto p = random_table(n, 2, 2, rng);
    const std::vector<double> mu{0.35, 0.65};
    const double inf = infimum_kl_over_symmetric(p, mu, spec(SymmetryKind::type1, n));
    const double mi = conditional_mutual_information({mu, p}, ArrangementKind::J);
    EXPECT_NEAR(inf, mi, 1e-9) << trial;
  }
}

TEST(InfimumKl, EqualsTInformationForBlockExchangeableTables) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 2;
    const auto perms = within_half_group(n);
    const auto p = average_over(random_table(n, 2, 2, rng), perms);
    const std::vector<double> mu{0.5, 0.5};
    const double inf = infimum_kl_over_symmetric(p, mu, spec(SymmetryKind::type2, n));
    const double mi = conditional_mutual_information({mu, p}, ArrangementKind::T);
    EXPECT_NEAR(inf, mi, 1e-9) << trial;
  }
}

TEST(InfimumKl, TInformationDiffersForPositionDependentTables) {
  // Subset arrangements are not a group, so the identity needs exchangeability
  // within each half; an arbitrary n = 2 table breaks it.
  std::mt19937_64 rng(29);
  const auto p = random_table(2, 2, 2, rng);
  const std::vector<double> mu{0.5, 0.5};
  const double inf = infimum_kl_over_symmetric(p, mu, spec(SymmetryKind::type2, 2));
  const double mi = conditional_mutual_information({mu, p}, ArrangementKind::T);
  EXPECT_GT(std::abs(inf - mi), 1e-4);
}

TEST(InfimumKl, GroupAverageBeatsOtherSymmetricPriors) {
  std::mt19937_64 rng(31);
  const std::vector<double> mu{0.4, 0.6};
  const auto p = random_table(2, 2, 2, rng);
  const double best = infimum_kl_over_symmetric(p, mu, spec(SymmetryKind::type1, 2));
  for (int trial = 0; trial < 100; ++trial) {
    const auto q = symmetrize(random_table(2, 2, 2, rng), spec(SymmetryKind::type1, 2));
    EXPECT_LE(best, expected_row_kl(p, q, mu) + 1e-12);
  }
}

TEST(InfimumKl, LargerGroupNeverCheaper) {
  std::mt19937_64 rng(37);
  const std::vector<double> mu{0.5, 0.5};
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_table(2, 2, 2, rng);
    EXPECT_GE(infimum_kl_over_symmetric(p, mu, spec(SymmetryKind::type2, 2)),
              infimum_kl_over_symmetric(p, mu, spec(SymmetryKind::type1, 2)) - 1e-12);
  }
}

TEST(InfimumKl, ZeroForSymmetricInput) {
  std::mt19937_64 rng(41);
  const auto p = symmetrize(random_table(2, 2, 2, rng), spec(SymmetryKind::type2, 2));
  EXPECT_NEAR(infimum_kl_over_symmetric(p, std::vector<double>{0.5, 0.5}, spec(SymmetryKind::type2, 2)),
              0.0, 1e-14);
}

TEST(DiscreteLearner, ConstantLearnerGivesPointMass) {
  DiscreteLearningProblem p;
  p.label_dist = {0.5, 0.5};
  p.x_given_y = {{1.0, 0.0}, {0.0, 1.0}};
  p.pred_alphabet = 2;
  p.predict = {{{0.0, 1.0}, {0.0, 1.0}}};
  p.posterior = [](std::span<const int>, std::span<const int>) { return std::vector<double>{1.0}; };
  const auto q = induced_conditional(p, 2);
  for (std::size_t r = 0; r < q.rows(); ++r) EXPECT_DOUBLE_EQ(q(r, q.cols() - 1), 1.0);
}

TEST(DiscreteLearner, ThresholdTableIsBlockExchangeable) {
  const auto problem = threshold_problem(4, 2, 0.1);
  const auto q = induced_conditional(problem, 2);
  const auto perms = within_half_group(2);
  const auto avg = average_over(q, perms);
  for (std::size_t i = 0; i < q.table().size(); ++i) EXPECT_NEAR(avg.table()[i], q.table()[i], 1e-14);
  const double inf = infimum_kl_over_symmetric(q, problem.label_dist, spec(SymmetryKind::type2, 2));
  const double mi = conditional_mutual_information({problem.label_dist, q}, ArrangementKind::T);
  EXPECT_NEAR(inf, mi, 1e-9);
}

TEST(DiscreteLearner, RisksOfThresholds) {
  const auto problem = threshold_problem(4, 2, 0.1);
  EXPECT_NEAR(population_risk(problem, 2), 0.1, 1e-15);
  EXPECT_NEAR(population_risk(problem, 0), 0.5, 1e-15);
  const std::vector<int> x{0, 3};
  const std::vector<int> y{1, 1};
  EXPECT_DOUBLE_EQ(empirical_risk(problem, 2, x, y), 0.5);
}

TEST(DiscreteLearner, GapSimulationIsDeterministic) {
  const auto problem = threshold_problem(4, 2, 0.1);
  const auto a = simulate_expected_gap(problem, 3, 2000, 9);
  const auto b = simulate_expected_gap(problem, 3, 2000, 9);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_GT(a.std_error, 0.0);
}

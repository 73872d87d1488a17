#pragma once

#include "mdlb/discrete_conditional.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace mdlb {

/// A learner on finite feature and label spaces.
/// The posterior must depend on the training set only as a multiset.
struct DiscreteLearningProblem {
  std::vector<double> label_dist;               // K
  std::vector<std::vector<double>> x_given_y;   // K rows over the feature alphabet
  int pred_alphabet = 2;
  /// predict[w][x] = distribution over predicted labels.
  std::vector<std::vector<std::vector<double>>> predict;
  std::function<std::vector<double>(std::span<const int> x, std::span<const int> y)> posterior;

  int num_labels() const { return static_cast<int>(label_dist.size()); }
  int num_features() const { return x_given_y.empty() ? 0 : static_cast<int>(x_given_y.front().size()); }
  int num_hypotheses() const { return static_cast<int>(predict.size()); }
};

/// Checks shapes and normalization; throws std::invalid_argument.
void validate(const DiscreteLearningProblem& problem);

/// Q(yhat^{2n} | y^{2n}) obtained by drawing the training features, the hypothesis,
/// and every prediction; positions 0..n-1 are training samples.
DiscreteConditional induced_conditional(const DiscreteLearningProblem& problem, int n);

/// Expected 0-1 loss of hypothesis w under the data law.
double population_risk(const DiscreteLearningProblem& problem, int w);

/// Mean expected 0-1 loss of hypothesis w on a sample.
double empirical_risk(const DiscreteLearningProblem& problem, int w, std::span<const int> x,
                      std::span<const int> y);

struct GapEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t draws = 0;
};

/// Monte Carlo over training sets of E_W[L(W) - Lhat(S,W)]; the expectation over the
/// hypothesis and the predictions is exact for each drawn set.
GapEstimate simulate_expected_gap(const DiscreteLearningProblem& problem, int n, std::size_t draws,
                                  std::uint64_t seed);

/// Thresholds on {0..levels-1}: y = [x >= true_threshold] flipped with probability `flip`,
/// x uniform. Hypothesis t predicts 1 iff x >= t (t = 0..levels). The posterior is uniform
/// over the thresholds with minimal training error (random tie-breaking); with
/// `smoothing` > 0 every prediction is flipped with that probability.
DiscreteLearningProblem threshold_problem(int levels, int true_threshold, double flip,
                                          double smoothing = 0.0);

}  // namespace mdlb

#pragma once

#include "mdlb/dataset.hpp"
#include "mdlb/discrete_learner.hpp"
#include "mdlb/model.hpp"
#include "mdlb/objective.hpp"
#include "mdlb/prior_bank.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mdlb {

inline constexpr double kDefaultDelta = 0.05;
inline constexpr int kDefaultTestSamples = 12;

struct BoundInputs {
  std::size_t n = 1;
  int num_classes = 2;
  double kl_term = 0.0;  // nats
  double epsilon = 0.0;
  double delta = kDefaultDelta;
  std::optional<double> lambda;

  /// Throws std::invalid_argument.
  void validate() const;
};

/// sqrt(2 kl / n) + epsilon.
double expectation_bound_t1(double kl_term, std::size_t n, double epsilon = 0.0);

struct TailBounds {
  /// sqrt(4/(2n-1) (kl + ln(sqrt(2n)/delta))), bounds the train/ghost risk difference.
  double ghost_difference;
  /// sqrt(ln(2/delta)/(2n)) + sqrt(4/(2n-1) (kl + ln(sqrt(8n)/delta)) + epsilon).
  double generalization;
};
TailBounds tail_bound_t1(double kl_value, std::size_t n, double delta, double epsilon = 0.0);

struct RiskBound {
  double bound = 1.0;        // largest risk r with n h_D(r, Lhat) <= kl + ln n [+ ln(1/delta)]
  bool vacuous = false;      // target beyond h_D(1, Lhat): reported as 1
  bool below_min_n = false;  // n < 10, where the guarantee is not claimed
  /// Realizable case only: (kl + ln(n/delta)) / n, and the same divided by ln 2,
  /// which is what h_D in nats actually implies.
  std::optional<double> linear_form;
  std::optional<double> linear_form_nats;
};
RiskBound population_risk_bound_t3(double kl_value, std::size_t n, double empirical_risk,
                                   std::optional<double> delta = std::nullopt);

/// 2 sqrt((2 kl + K + 2) / n) + epsilon.
double representation_bound_t4(double latent_kl, std::size_t n, int num_classes, double epsilon = 0.0);

enum class TailPart {
  ghost_difference,  // A = kl + (K+2)/2 + ln(1/delta)
  generalization,    // A = kl + (K+2)/2 + ln(2/delta), plus sqrt(ln(2/delta)/n)
};

struct RepresentationTail {
  double value = 0.0;
  double lambda = 0.0;
  double a_term = 0.0;
};
/// A/lambda + 2 lambda/n; lambda defaults to the minimizer sqrt(n A / 2).
RepresentationTail representation_tail_t7(double latent_kl, std::size_t n, int num_classes, double delta,
                                          std::optional<double> lambda = std::nullopt,
                                          TailPart part = TailPart::generalization);

/// d ln(2 e n / d), for 1 <= d <= 2n.
double vc_prior_bound(std::size_t n, std::size_t d);

struct LatentKlEstimate {
  double total = 0.0;  // sum over train and ghost samples
  double mean = 0.0;
  double std_error = 0.0;        // of the mean
  double total_std_error = 0.0;  // of the total
  std::size_t count = 0;
};

/// Sum of per-sample regularizers over both sets, each sample measured against the
/// center chosen by the objective's assignment rule.
LatentKlEstimate estimate_latent_kl(const Dataset& train, const Dataset& ghost, const Model& model,
                                    const PriorBank& bank, Objective objective);

struct GapEstimate01 {
  double gap = 0.0;
  double train_risk = 0.0;
  double test_risk = 0.0;
  std::vector<double> train_losses;  // 1 - P(yhat = y | x), averaged over latent draws
  std::vector<double> test_losses;
};

GapEstimate01 empirical_gap(const Model& model, const Dataset& train, const Dataset& test,
                            int samples = kDefaultTestSamples, std::uint64_t seed = 0);

struct BoundReport {
  BoundInputs inputs;
  double t1_expectation = 0.0;
  double t1_tail = 0.0;
  double t3_population_risk = 0.0;
  double t4_expectation = 0.0;
  double t5_tail = 0.0;
  double t6_population_risk = 0.0;
  double t7_tail = 0.0;
  double empirical_gap = 0.0;
  double train_risk = 0.0;
  double test_risk = 0.0;
  double kl_std_error = 0.0;
  bool t3_below_min_n = false;
  std::uint64_t seed = 0;
  std::string objective;

  /// Fields at or above 1 are vacuous for a [0, 1] loss.
  std::vector<std::pair<std::string, double>> bound_fields() const;
  std::string to_json() const;
  static std::string csv_header();
  std::string csv_row() const;
};

/// Evaluates every bound from the inputs plus the measured risks.
BoundReport make_bound_report(const BoundInputs& inputs, double train_risk, double test_risk);

struct DiscreteBoundCheck {
  double mutual_information = 0.0;  // I(J; Yhat^{2n} | Y^{2n}) in nats
  double bound = 0.0;               // sqrt(2 I / n)
  GapEstimate gap;
  bool holds = false;               // gap.mean <= bound + 3 gap.std_error
};

/// Exact conditional information of a learner's induced predictions against a
/// Monte Carlo estimate of its expected generalization gap.
DiscreteBoundCheck check_discrete_expectation_bound(const DiscreteLearningProblem& problem, int n,
                                                      std::size_t draws, std::uint64_t seed);

}  // namespace mdlb

#include "mdlb/bounds.hpp"

#include "mdlb/entropy.hpp"
#include "mdlb/rearrangement.hpp"
#include "mdlb/trainer.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace mdlb {
namespace {

void require_nonneg(double v, const char* what) {
  if (!(v >= 0.0) || std::isnan(v)) throw std::invalid_argument(std::string(what) + " must be >= 0");
}

void require_n(std::size_t n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
}

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

double as_double(std::size_t n) { return static_cast<double>(n); }

}  // namespace

void BoundInputs::validate() const {
  require_n(n);
  if (num_classes < 2) throw std::invalid_argument("K must be >= 2");
  require_nonneg(kl_term, "kl_term");
  if (std::isinf(kl_term)) throw std::invalid_argument("kl_term must be finite");
  require_nonneg(epsilon, "epsilon");
  require_delta(delta);
  if (lambda && !(*lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
}

double expectation_bound_t1(double kl_term, std::size_t n, double epsilon) {
  require_nonneg(kl_term, "kl_term");
  require_nonneg(epsilon, "epsilon");
  require_n(n);
  return std::sqrt(2.0 * kl_term / as_double(n)) + epsilon;
}

TailBounds tail_bound_t1(double kl_value, std::size_t n, double delta, double epsilon) {
  require_nonneg(kl_value, "kl_value");
  require_nonneg(epsilon, "epsilon");
  require_n(n);
  require_delta(delta);
  const double nn = as_double(n);
  const double scale = 4.0 / (2.0 * nn - 1.0);
  TailBounds out;
  out.ghost_difference = std::sqrt(scale * (kl_value + std::log(std::sqrt(2.0 * nn) / delta)));
  out.generalization = std::sqrt(std::log(2.0 / delta) / (2.0 * nn)) +
                       std::sqrt(scale * (kl_value + std::log(std::sqrt(8.0 * nn) / delta)) + epsilon);
  return out;
}

RiskBound population_risk_bound_t3(double kl_value, std::size_t n, double empirical_risk,
                                   std::optional<double> delta) {
  require_nonneg(kl_value, "kl_value");
  require_n(n);
  if (!(empirical_risk >= 0.0 && empirical_risk <= 1.0)) {
    throw std::invalid_argument("empirical_risk must lie in [0, 1]");
  }
  if (delta && !(*delta > 0.0 && *delta <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
  const double nn = as_double(n);
  const double slack = std::log(nn) + (delta ? std::log(1.0 / *delta) : 0.0);
  const double target = (kl_value + slack) / nn;

  RiskBound out;
  out.below_min_n = n < 10;
  if (!std::isfinite(target) || target >= h_d(1.0, empirical_risk)) {
    out.bound = 1.0;
    out.vacuous = true;
  } else {
    out.bound = h_d_inverse(empirical_risk, target);
  }
  if (empirical_risk == 0.0) {
    out.linear_form = (kl_value + std::log(nn / delta.value_or(1.0))) / nn;
    out.linear_form_nats = *out.linear_form / std::numbers::ln2;
  }
  return out;
}

double representation_bound_t4(double latent_kl, std::size_t n, int num_classes, double epsilon) {
  require_nonneg(latent_kl, "latent_kl");
  require_nonneg(epsilon, "epsilon");
  require_n(n);
  if (num_classes < 2) throw std::invalid_argument("K must be >= 2");
  return 2.0 * std::sqrt((2.0 * latent_kl + num_classes + 2.0) / as_double(n)) + epsilon;
}

RepresentationTail representation_tail_t7(double latent_kl, std::size_t n, int num_classes, double delta,
                                          std::optional<double> lambda, TailPart part) {
  require_nonneg(latent_kl, "latent_kl");
  require_n(n);
  require_delta(delta);
  if (num_classes < 2) throw std::invalid_argument("K must be >= 2");
  if (lambda && !(*lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  const double nn = as_double(n);
  const bool gen = part == TailPart::generalization;
  RepresentationTail out;
  out.a_term = latent_kl + (num_classes + 2.0) / 2.0 + std::log((gen ? 2.0 : 1.0) / delta);
  out.lambda = lambda.value_or(std::sqrt(nn * out.a_term / 2.0));
  out.value = out.a_term / out.lambda + 2.0 * out.lambda / nn;
  if (gen) out.value += std::sqrt(std::log(2.0 / delta) / nn);
  return out;
}

double vc_prior_bound(std::size_t n, std::size_t d) {
  require_n(n);
  if (d < 1 || d > 2 * n) throw std::invalid_argument("vc_prior_bound needs 1 <= d <= 2n");
  const double dd = static_cast<double>(d);
  return dd * std::log(2.0 * std::numbers::e * as_double(n) / dd);
}

LatentKlEstimate estimate_latent_kl(const Dataset& train, const Dataset& ghost, const Model& model,
                                    const PriorBank& bank, Objective objective) {
  if (train.size() == 0 || ghost.size() == 0) throw std::invalid_argument("estimate_latent_kl: empty dataset");
  if (train.dim() != model.shape().input_dim || ghost.dim() != model.shape().input_dim) {
    throw std::invalid_argument("estimate_latent_kl: input dimension mismatch");
  }
  if (objective != Objective::vib && bank.latent_dim() != model.shape().latent) {
    throw std::invalid_argument("estimate_latent_kl: bank dimension mismatch");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (const Dataset* d : {&train, &ghost}) {
    d->validate();
    for (std::size_t i = 0; i < d->size(); ++i) {
      const auto g = encoder_forward(model.encoder, d->features.row(static_cast<Eigen::Index>(i)).transpose());
      const double v = sample_regularizer(objective, g, d->labels[i], bank).value;
      sum += v;
      sum_sq += v * v;
      ++count;
    }
  }
  LatentKlEstimate out;
  out.count = count;
  out.total = sum;
  out.mean = sum / static_cast<double>(count);
  if (count > 1) {
    const double var = std::max(sum_sq - sum * out.mean, 0.0) / static_cast<double>(count - 1);
    out.std_error = std::sqrt(var / static_cast<double>(count));
  }
  out.total_std_error = out.std_error * static_cast<double>(count);
  return out;
}

GapEstimate01 empirical_gap(const Model& model, const Dataset& train, const Dataset& test, int samples,
                            std::uint64_t seed) {
  const PriorBank unused(model.shape().classes, 1, model.shape().latent, 0.0);
  GapEstimate01 out;
  auto losses = [&](const Dataset& d, std::uint64_t s) {
    const auto ev = evaluate(model, unused, Objective::vib, 0.0, d, samples, s);
    std::vector<double> l;
    l.reserve(ev.prob_correct.size());
    for (double p : ev.prob_correct) l.push_back(1.0 - p);
    return l;
  };
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };
  out.train_losses = losses(train, seed);
  out.test_losses = losses(test, seed + 1);
  out.train_risk = mean(out.train_losses);
  out.test_risk = mean(out.test_losses);
  out.gap = out.test_risk - out.train_risk;
  return out;
}

BoundReport make_bound_report(const BoundInputs& in, double train_risk, double test_risk) {
  in.validate();
  BoundReport r;
  r.inputs = in;
  r.train_risk = train_risk;
  r.test_risk = test_risk;
  r.empirical_gap = test_risk - train_risk;
  r.t1_expectation = expectation_bound_t1(in.kl_term, in.n, in.epsilon);
  const auto tails = tail_bound_t1(in.kl_term, in.n, in.delta, in.epsilon);
  r.t1_tail = tails.ghost_difference;
  r.t5_tail = tails.generalization;
  const auto t3 = population_risk_bound_t3(in.kl_term, in.n, train_risk);
  r.t3_population_risk = t3.bound;
  r.t3_below_min_n = t3.below_min_n;
  r.t6_population_risk = population_risk_bound_t3(in.kl_term, in.n, train_risk, in.delta).bound;
  r.t4_expectation = representation_bound_t4(in.kl_term, in.n, in.num_classes, in.epsilon);
  r.t7_tail = representation_tail_t7(in.kl_term, in.n, in.num_classes, in.delta, in.lambda).value;
  return r;
}

std::vector<std::pair<std::string, double>> BoundReport::bound_fields() const {
  return {{"t1_expectation", t1_expectation}, {"t1_tail", t1_tail},
          {"t3_population_risk", t3_population_risk}, {"t4_expectation", t4_expectation},
          {"t5_tail", t5_tail}, {"t6_population_risk", t6_population_risk}, {"t7_tail", t7_tail}};
}

std::string BoundReport::to_json() const {
  nlohmann::ordered_json j;
  j["inputs"] = {{"n", inputs.n}, {"K", inputs.num_classes}, {"kl_term", inputs.kl_term},
                 {"epsilon", inputs.epsilon}, {"delta", inputs.delta},
                 {"lambda", inputs.lambda ? nlohmann::ordered_json(*inputs.lambda) : nlohmann::ordered_json()}};
  nlohmann::ordered_json vacuous = nlohmann::ordered_json::object();
  for (const auto& [name, value] : bound_fields()) {
    j[name] = value;
    vacuous[name] = value >= 1.0;
  }
  j["empirical_gap"] = empirical_gap;
  j["train_risk"] = train_risk;
  j["test_risk"] = test_risk;
  j["kl_std_error"] = kl_std_error;
  j["vacuous"] = vacuous;
  j["t3_below_min_n"] = t3_below_min_n;
  j["metadata"] = {{"seed", seed}, {"objective", objective}};
  return j.dump(2) + "\n";
}

std::string BoundReport::csv_header() {
  return "n,K,kl_term,epsilon,delta,t1_expectation,t1_tail,t3_population_risk,t4_expectation,t5_tail,"
         "t6_population_risk,t7_tail,empirical_gap,train_risk,test_risk,seed,objective\n";
}

std::string BoundReport::csv_row() const {
  std::ostringstream out;
  out << std::setprecision(10);
  out << inputs.n << ',' << inputs.num_classes << ',' << inputs.kl_term << ',' << inputs.epsilon << ','
      << inputs.delta;
  for (const auto& f : bound_fields()) out << ',' << f.second;
  out << ',' << empirical_gap << ',' << train_risk << ',' << test_risk << ',' << seed << ',' << objective << '\n';
  return out.str();
}

DiscreteBoundCheck check_discrete_expectation_bound(const DiscreteLearningProblem& problem, int n,
                                                      std::size_t draws, std::uint64_t seed) {
  DiscreteBoundCheck out;
  const auto q = induced_conditional(problem, n);
  out.mutual_information = conditional_mutual_information({problem.label_dist, q}, ArrangementKind::J);
  out.bound = expectation_bound_t1(out.mutual_information, static_cast<std::size_t>(n));
  out.gap = simulate_expected_gap(problem, n, draws, seed);
  out.holds = out.gap.mean <= out.bound + 3.0 * out.gap.std_error;
  return out;
}

}  // namespace mdlb

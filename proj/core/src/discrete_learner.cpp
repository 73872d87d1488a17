#include "mdlb/discrete_learner.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace mdlb {
namespace {

void check_distribution(std::span<const double> p, const char* what) {
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + ": negative probability");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument(std::string(what) + ": does not sum to 1");
  }
}

int draw(std::mt19937_64& rng, std::span<const double> p) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return static_cast<int>(i);
  }
  // Rounding left u above the final partial sum: take the last nonzero entry.
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i] > 0.0) return static_cast<int>(i);
  }
  return 0;
}

}  // namespace

void validate(const DiscreteLearningProblem& problem) {
  const int k = problem.num_labels();
  const int x = problem.num_features();
  if (k < 1 || x < 1) throw std::invalid_argument("DiscreteLearningProblem: empty alphabet");
  if (static_cast<int>(problem.x_given_y.size()) != k) {
    throw std::invalid_argument("DiscreteLearningProblem: x_given_y needs one row per label");
  }
  check_distribution(problem.label_dist, "label_dist");
  for (const auto& row : problem.x_given_y) {
    if (static_cast<int>(row.size()) != x) {
      throw std::invalid_argument("DiscreteLearningProblem: ragged x_given_y");
    }
    check_distribution(row, "x_given_y");
  }
  if (problem.predict.empty()) throw std::invalid_argument("DiscreteLearningProblem: no hypotheses");
  for (const auto& w : problem.predict) {
    if (static_cast<int>(w.size()) != x) {
      throw std::invalid_argument("DiscreteLearningProblem: predict needs one row per feature");
    }
    for (const auto& d : w) {
      if (static_cast<int>(d.size()) != problem.pred_alphabet) {
        throw std::invalid_argument("DiscreteLearningProblem: prediction size mismatch");
      }
      check_distribution(d, "predict");
    }
  }
  if (!problem.posterior) throw std::invalid_argument("DiscreteLearningProblem: no posterior");
}

DiscreteConditional induced_conditional(const DiscreteLearningProblem& problem, int n) {
  validate(problem);
  const int hyps = problem.num_hypotheses();
  const int pa = problem.pred_alphabet;
  DiscreteConditional q(n, problem.num_labels(), pa);
  const VectorCodec xs(n, problem.num_features());

  // Ghost predictions given only the label: g[w][y][yhat].
  std::vector<std::vector<std::vector<double>>> ghost(
      static_cast<std::size_t>(hyps),
      std::vector<std::vector<double>>(problem.label_dist.size(),
                                       std::vector<double>(static_cast<std::size_t>(pa), 0.0)));
  for (int w = 0; w < hyps; ++w) {
    for (std::size_t y = 0; y < problem.label_dist.size(); ++y) {
      for (int xv = 0; xv < problem.num_features(); ++xv) {
        const double px = problem.x_given_y[y][static_cast<std::size_t>(xv)];
        for (int c = 0; c < pa; ++c) {
          ghost[static_cast<std::size_t>(w)][y][static_cast<std::size_t>(c)] +=
              px * problem.predict[static_cast<std::size_t>(w)][static_cast<std::size_t>(xv)]
                                  [static_cast<std::size_t>(c)];
        }
      }
    }
  }

  const std::size_t len = static_cast<std::size_t>(2 * n);
  std::vector<int> y(len);
  std::vector<int> x_train(static_cast<std::size_t>(n));
  std::vector<int> digits(len);
  std::vector<const std::vector<double>*> factors(len);
  for (std::size_t r = 0; r < q.rows(); ++r) {
    q.label_codec().decode_into(r, y);
    const std::span<const int> y_train(y.data(), static_cast<std::size_t>(n));
    auto dst = q.row(r);
    for (std::size_t xc = 0; xc < xs.size(); ++xc) {
      xs.decode_into(xc, x_train);
      double px = 1.0;
      for (int i = 0; i < n; ++i) {
        px *= problem.x_given_y[static_cast<std::size_t>(y[static_cast<std::size_t>(i)])]
                               [static_cast<std::size_t>(x_train[static_cast<std::size_t>(i)])];
      }
      if (px == 0.0) continue;
      const auto post = problem.posterior(x_train, y_train);
      if (static_cast<int>(post.size()) != hyps) {
        throw std::invalid_argument("posterior returned the wrong number of weights");
      }
      for (int w = 0; w < hyps; ++w) {
        const double pw = px * post[static_cast<std::size_t>(w)];
        if (pw == 0.0) continue;
        for (std::size_t i = 0; i < len; ++i) {
          factors[i] = i < static_cast<std::size_t>(n)
                           ? &problem.predict[static_cast<std::size_t>(w)]
                                             [static_cast<std::size_t>(x_train[i])]
                           : &ghost[static_cast<std::size_t>(w)][static_cast<std::size_t>(y[i])];
        }
        std::fill(digits.begin(), digits.end(), 0);
        for (std::size_t c = 0; c < q.cols(); ++c) {
          double v = pw;
          for (std::size_t i = 0; i < len && v != 0.0; ++i) v *= (*factors[i])[static_cast<std::size_t>(digits[i])];
          dst[c] += v;
          for (std::size_t i = 0; i < len; ++i) {
            if (++digits[i] < pa) break;
            digits[i] = 0;
          }
        }
      }
    }
  }
  q.validate();
  return q;
}

double population_risk(const DiscreteLearningProblem& problem, int w) {
  double risk = 0.0;
  const auto& f = problem.predict.at(static_cast<std::size_t>(w));
  for (std::size_t y = 0; y < problem.label_dist.size(); ++y) {
    for (std::size_t x = 0; x < f.size(); ++x) {
      const double correct = y < f[x].size() ? f[x][y] : 0.0;
      risk += problem.label_dist[y] * problem.x_given_y[y][x] * (1.0 - correct);
    }
  }
  return risk;
}

double empirical_risk(const DiscreteLearningProblem& problem, int w, std::span<const int> x,
                      std::span<const int> y) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("empirical_risk: bad sample");
  const auto& f = problem.predict.at(static_cast<std::size_t>(w));
  double loss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& d = f.at(static_cast<std::size_t>(x[i]));
    const auto yi = static_cast<std::size_t>(y[i]);
    loss += 1.0 - (yi < d.size() ? d[yi] : 0.0);
  }
  return loss / static_cast<double>(x.size());
}

GapEstimate simulate_expected_gap(const DiscreteLearningProblem& problem, int n, std::size_t draws,
                                  std::uint64_t seed) {
  validate(problem);
  if (n < 1 || draws < 2) throw std::invalid_argument("simulate_expected_gap: need n >= 1, draws >= 2");
  std::vector<double> pop(static_cast<std::size_t>(problem.num_hypotheses()));
  for (int w = 0; w < problem.num_hypotheses(); ++w) pop[static_cast<std::size_t>(w)] = population_risk(problem, w);

  std::mt19937_64 rng(seed);
  std::vector<int> x(static_cast<std::size_t>(n));
  std::vector<int> y(static_cast<std::size_t>(n));
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t d = 0; d < draws; ++d) {
    for (int i = 0; i < n; ++i) {
      const int yi = draw(rng, problem.label_dist);
      y[static_cast<std::size_t>(i)] = yi;
      x[static_cast<std::size_t>(i)] = draw(rng, problem.x_given_y[static_cast<std::size_t>(yi)]);
    }
    const auto post = problem.posterior(x, y);
    double gap = 0.0;
    for (int w = 0; w < problem.num_hypotheses(); ++w) {
      const double pw = post[static_cast<std::size_t>(w)];
      if (pw > 0.0) gap += pw * (pop[static_cast<std::size_t>(w)] - empirical_risk(problem, w, x, y));
    }
    sum += gap;
    sum_sq += gap * gap;
  }
  const double m = static_cast<double>(draws);
  GapEstimate out;
  out.draws = draws;
  out.mean = sum / m;
  const double var = std::max(sum_sq / m - out.mean * out.mean, 0.0) * m / (m - 1.0);
  out.std_error = std::sqrt(var / m);
  return out;
}

DiscreteLearningProblem threshold_problem(int levels, int true_threshold, double flip, double smoothing) {
  if (levels < 2 || true_threshold < 0 || true_threshold > levels) {
    throw std::invalid_argument("threshold_problem: bad levels or threshold");
  }
  if (!(flip >= 0.0 && flip <= 0.5) || !(smoothing >= 0.0 && smoothing <= 0.5)) {
    throw std::invalid_argument("threshold_problem: flip and smoothing must lie in [0, 0.5]");
  }
  DiscreteLearningProblem p;
  const auto lv = static_cast<std::size_t>(levels);
  // Joint law p(x, y), then split into p(y) and p(x | y).
  std::vector<std::vector<double>> joint(2, std::vector<double>(lv, 0.0));
  for (int x = 0; x < levels; ++x) {
    const int clean = x >= true_threshold ? 1 : 0;
    joint[static_cast<std::size_t>(clean)][static_cast<std::size_t>(x)] += (1.0 - flip) / levels;
    joint[static_cast<std::size_t>(1 - clean)][static_cast<std::size_t>(x)] += flip / levels;
  }
  p.label_dist.assign(2, 0.0);
  p.x_given_y.assign(2, std::vector<double>(lv, 0.0));
  for (std::size_t y = 0; y < 2; ++y) {
    for (double v : joint[y]) p.label_dist[y] += v;
    if (p.label_dist[y] == 0.0) {
      throw std::invalid_argument("threshold_problem: a label has zero probability");
    }
    for (std::size_t x = 0; x < lv; ++x) p.x_given_y[y][x] = joint[y][x] / p.label_dist[y];
  }

  p.pred_alphabet = 2;
  for (int t = 0; t <= levels; ++t) {
    std::vector<std::vector<double>> f(lv);
    for (int x = 0; x < levels; ++x) {
      const bool one = x >= t;
      f[static_cast<std::size_t>(x)] = one ? std::vector<double>{smoothing, 1.0 - smoothing}
                                           : std::vector<double>{1.0 - smoothing, smoothing};
    }
    p.predict.push_back(std::move(f));
  }
  p.posterior = [levels](std::span<const int> x, std::span<const int> y) {
    std::vector<int> errors(static_cast<std::size_t>(levels + 1), 0);
    for (int t = 0; t <= levels; ++t) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        errors[static_cast<std::size_t>(t)] += ((x[i] >= t ? 1 : 0) != y[i]) ? 1 : 0;
      }
    }
    const int best = *std::min_element(errors.begin(), errors.end());
    std::vector<double> post(errors.size(), 0.0);
    double count = 0.0;
    for (int e : errors) count += e == best ? 1.0 : 0.0;
    for (std::size_t t = 0; t < errors.size(); ++t) post[t] = errors[t] == best ? 1.0 / count : 0.0;
    return post;
  };
  return p;
}

}  // namespace mdlb

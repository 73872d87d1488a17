#include "mdlb/bounds.hpp"
#include "mdlb/combinatorics.hpp"
#include "mdlb/discrete_learner.hpp"
#include "mdlb/entropy.hpp"
#include "mdlb/oracle_sim.hpp"
#include "mdlb/parallel.hpp"
#include "mdlb/rng.hpp"
#include "mdlb/symmetry.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace mdlb {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Uniform on the open interval (0, 1).
double open_uniform(std::mt19937_64& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53; }

std::string at(const char* fmt, double a, double b) {
  char buf[96];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

// Tracks the minimum margin and where it occurred.
struct Worst {
  double margin = kInf;
  double a = 0.0;
  double b = 0.0;
  void take(double m, double x, double y) {
    if (m < margin) {
      margin = m;
      a = x;
      b = y;
    }
  }
};

}  // namespace

VerificationReport verify_hd_lemma(int resolution, std::uint64_t seed) {
  if (resolution < 100) throw std::invalid_argument("verify_hd_lemma: resolution must be >= 100");
  Stopwatch clock;
  VerificationReport r;
  r.check = "hd_lemma";
  r.parameters = {{"resolution", resolution}, {"seed", static_cast<double>(seed)}};
  const double step = 1.0 / (resolution - 1);
  auto grid = [&](int i) { return i == resolution - 1 ? 1.0 : i * step; };

  Worst quad;
  Worst mono;
  for (int j = 0; j < resolution; ++j) {
    const double xp = grid(j);
    double prev = 0.0;
    for (int i = 0; i < resolution; ++i) {
      const double x = grid(i);
      const double v = h_d(x, xp);
      quad.take(v - (x - xp) * (x - xp), x, xp);
      if (i > j) mono.take(v - prev, x, xp);
      prev = v;
    }
  }
  r.add_part("(i) h_D(x,x') >= (x-x')^2 [nats]", quad.margin, 1e-12, at("at x=%.4f x'=%.4f", quad.a, quad.b));

  Worst lin_bits;
  Worst lin_nats;
  const int line = std::max(1000, resolution);
  for (int i = 0; i < line; ++i) {
    const double x = static_cast<double>(i) / (line - 1);
    lin_bits.take(h_d(x, 0.0, LogBase::base2) - x, x, 0.0);
    lin_nats.take(h_d(x, 0.0) - x, x, 0.0);
  }
  r.add_part("(ii) h_D(x,0) >= x [bits]", lin_bits.margin, 1e-12, at("at x=%.4f", lin_bits.a, 0.0));
  r.add_part("(ii) h_D(x,0) >= x [nats]", lin_nats.margin, 1e-12, at("at x=%.4f", lin_nats.a, 0.0), true);
  r.add_part("(iii) nondecreasing in x on [x',1]", mono.margin, 1e-12, at("at x=%.4f x'=%.4f", mono.a, mono.b));

  std::mt19937_64 rng(seed);
  Worst convex;
  const long pairs = static_cast<long>(resolution) * resolution;
  for (long k = 0; k < pairs; ++k) {
    const double p0 = open_uniform(rng), p1 = open_uniform(rng);
    const double q0 = open_uniform(rng), q1 = open_uniform(rng);
    const double mid = h_d(0.5 * (p0 + q0), 0.5 * (p1 + q1));
    convex.take(0.5 * (h_d(p0, p1) + h_d(q0, q1)) - mid, p0, p1);
  }
  r.add_part("(iv) joint midpoint convexity", convex.margin, 1e-12, at("at p=(%.4f,%.4f)", convex.a, convex.b));
  r.notes.push_back("part (ii) holds in bits only; its nats margin is informational");
  r.runtime_seconds = clock.seconds();
  return r;
}

double exp_hd_sum(int n, int v) {
  if (n < 1 || v < 0 || v > 2 * n) throw std::invalid_argument("exp_hd_sum: need n >= 1 and 0 <= V <= 2n");
  const auto un = static_cast<std::uint64_t>(n);
  const double denom = log_choose(2 * un, static_cast<std::uint64_t>(v));
  std::vector<double> terms;
  for (int j = std::max(0, v - n); j <= std::min(n, v); ++j) {
    const double x = static_cast<double>(j) / n;
    const double xp = static_cast<double>(v - j) / n;
    terms.push_back(n * h_d(x, xp) + log_choose(un, static_cast<std::uint64_t>(j)) +
                    log_choose(un, static_cast<std::uint64_t>(v - j)) - denom);
  }
  return std::exp(log_sum_exp(terms));
}

VerificationReport verify_exp_hd_sum(int n_min, int n_max) {
  if (n_min < 1 || n_max < n_min) throw std::invalid_argument("verify_exp_hd_sum: bad n range");
  Stopwatch clock;
  VerificationReport r;
  r.check = "exp_hd_sum";
  r.parameters = {{"n_min", n_min}, {"n_max", n_max}};
  for (int n = n_min; n <= n_max; ++n) {
    double worst = kInf;
    int worst_v = 0;
    double worst_sum = 0.0;
    for (int v = 1; v <= 2 * n; ++v) {
      const double s = exp_hd_sum(n, v);
      const double margin = 1.0 - s / n;
      if (margin < worst) {
        worst = margin;
        worst_v = v;
        worst_sum = s;
      }
    }
    const bool outside = n < 10;
    r.add_part("sum <= n for n=" + std::to_string(n), worst, 1e-9,
               "worst V=" + std::to_string(worst_v) + " sum=" + std::to_string(worst_sum) +
                   (outside ? " (outside theorem precondition n >= 10)" : ""),
               outside);
  }
  r.runtime_seconds = clock.seconds();
  return r;
}

VerificationReport verify_gallager(int n_max) {
  if (n_max < 2) throw std::invalid_argument("verify_gallager: n_max must be >= 2");
  Stopwatch clock;
  VerificationReport r;
  r.check = "gallager_sandwich";
  r.parameters = {{"n_max", n_max}};
  Worst lower;
  Worst upper;
  for (int n = 2; n <= n_max; ++n) {
    for (int j = 1; j < n; ++j) {
      const auto g = gallager_sandwich(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(j));
      lower.take(g.value - g.lower, n, j);
      upper.take(g.upper - g.value, n, j);
    }
  }
  r.add_part("lower <= value", lower.margin, 1e-12, at("at n=%.0f j=%.0f", lower.a, lower.b));
  r.add_part("value <= upper", upper.margin, 1e-12, at("at n=%.0f j=%.0f", upper.a, upper.b));
  r.runtime_seconds = clock.seconds();
  return r;
}

namespace {

// Pascal triangle of exact binomials; C(60, 30) < 2^64.
std::vector<std::vector<std::uint64_t>> pascal(int n_max) {
  std::vector<std::vector<std::uint64_t>> c(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    c[n].assign(static_cast<std::size_t>(n) + 1, 1);
    for (int k = 1; k < n; ++k) c[n][k] = c[n - 1][k - 1] + c[n - 1][k];
  }
  return c;
}

double exact_bucket(const std::vector<std::vector<std::uint64_t>>& c, int n, int a, int b) {
  std::uint64_t num = 0;  // at most C(2n, a+b)
  for (int k = b; k <= a + b; ++k) {
    if (k > n || a + b - k > n) continue;
    num += c[n][k] * c[n][a + b - k];
  }
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(c[2 * n][a + b]));
}

}  // namespace

VerificationReport verify_bucket(int vandermonde_n_max, int bmax_n_max) {
  if (vandermonde_n_max < 1 || bmax_n_max < 1 || bmax_n_max > 30) {
    throw std::invalid_argument("verify_bucket: need n limits >= 1 and bmax_n_max <= 30");
  }
  Stopwatch clock;
  VerificationReport r;
  r.check = "bucket";
  r.parameters = {{"vandermonde_n_max", vandermonde_n_max}, {"bmax_n_max", bmax_n_max}};

  Worst vander;
  for (int n = 1; n <= vandermonde_n_max; ++n) {
    for (int a = 0; a <= n; ++a) {
      const double v = bucket(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(a), 0);
      vander.take(-std::abs(v - 1.0), n, a);
    }
  }
  r.add_part("Bucket(n,a,0) = 1", vander.margin, 1e-10, at("at n=%.0f a=%.0f", vander.a, vander.b));

  const auto c = pascal(2 * bmax_n_max);
  const double deltas[] = {1.0, 0.5, 0.1, 0.05, 0.01, 1e-3};
  Worst agree;
  Worst attained;
  Worst beyond;
  for (int n = 1; n <= bmax_n_max; ++n) {
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; b <= n; ++b) {
        const double lib = bucket(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(a),
                                  static_cast<std::uint64_t>(b));
        const double ex = exact_bucket(c, n, a, b);
        agree.take(-std::abs(lib - ex) / std::max(ex, 1e-300), n, a);
      }
      for (double delta : deltas) {
        const auto bm = static_cast<int>(b_max(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(a), delta));
        attained.take(exact_bucket(c, n, a, bm) - delta, n, a);
        for (int b = bm + 1; b <= n; ++b) beyond.take(delta - exact_bucket(c, n, a, b), n, a);
      }
    }
  }
  r.add_part("Bucket matches exact integer sum (relative)", agree.margin, 1e-12,
             at("at n=%.0f a=%.0f", agree.a, agree.b));
  r.add_part("Bucket(n,a,b_max) >= delta", attained.margin, 1e-12, at("at n=%.0f a=%.0f", attained.a, attained.b));
  r.add_part("Bucket(n,a,b) < delta for b > b_max", beyond.margin, 1e-12,
             beyond.margin == kInf ? std::string("no larger b scanned") : at("at n=%.0f a=%.0f", beyond.a, beyond.b));
  r.runtime_seconds = clock.seconds();
  return r;
}

VerificationReport verify_bucket_asymptotics(int n, int a, int b, std::vector<int> m_list) {
  if (n < 1 || a < 0 || b < 0 || a + b > 2 * n || m_list.empty()) {
    throw std::invalid_argument("verify_bucket_asymptotics: need a + b <= 2n and a non-empty m list");
  }
  std::sort(m_list.begin(), m_list.end());
  if (m_list.front() < 1 || static_cast<double>(m_list.back()) * n > 1e6) {
    throw std::invalid_argument("verify_bucket_asymptotics: m n must lie in [1, 1e6]");
  }
  Stopwatch clock;
  VerificationReport r;
  r.check = "bucket_asymptotics";
  r.parameters = {{"n", n}, {"a", a}, {"b", b}};
  for (std::size_t i = 0; i < m_list.size(); ++i) r.parameters.emplace_back("m" + std::to_string(i), m_list[i]);

  const int lo = std::max(b, a + b - n);
  const int hi = std::min(a + b, n);
  std::vector<double> errors;
  std::vector<double> last_summand;
  for (int m : m_list) {
    const auto um = static_cast<std::uint64_t>(m);
    const auto mn = um * static_cast<std::uint64_t>(n);
    const double denom = log_choose(2 * mn, um * static_cast<std::uint64_t>(a + b));
    double err = 0.0;
    last_summand.clear();
    for (int t = lo; t <= hi; ++t) {
      const double log_term = log_choose(mn, um * static_cast<std::uint64_t>(t)) +
                              log_choose(mn, um * static_cast<std::uint64_t>(a + b - t)) - denom;
      last_summand.push_back(log_term);
      const double exponent = -log_term / static_cast<double>(mn);
      const double target = h_d(static_cast<double>(t) / n, static_cast<double>(a + b - t) / n);
      err = std::max(err, std::abs(exponent - target));
    }
    errors.push_back(err);
    r.notes.push_back("m=" + std::to_string(m) + " max exponent error " + std::to_string(err));
  }
  r.add_part("error at largest m <= 0.05", 0.05 - errors.back(), 0.0);
  double decrease = kInf;
  for (std::size_t i = 1; i < errors.size(); ++i) decrease = std::min(decrease, errors[i - 1] - errors[i]);
  if (errors.size() > 1) r.add_part("error strictly decreasing in m", decrease, 0.0);
  double fitted = 0.0;
  for (std::size_t i = 0; i < errors.size(); ++i) fitted = std::max(fitted, errors[i] * m_list[i]);
  r.add_part("fitted C in error <= C/m", fitted, 0.0, {}, true);

  // The dominant summand must sit where h_D is smallest (ties compared as sets).
  std::vector<double> hd;
  for (int t = lo; t <= hi; ++t) hd.push_back(h_d(static_cast<double>(t) / n, static_cast<double>(a + b - t) / n));
  const double max_term = *std::max_element(last_summand.begin(), last_summand.end());
  const double min_hd = *std::min_element(hd.begin(), hd.end());
  bool same = true;
  for (std::size_t i = 0; i < hd.size(); ++i) {
    const bool top = last_summand[i] >= max_term - 1e-9 * std::max(1.0, std::abs(max_term));
    const bool bottom = hd[i] <= min_hd + 1e-12;
    same = same && top == bottom;
  }
  r.add_part("argmax summand = argmin h_D", same ? 0.0 : -1.0, 0.0);
  r.runtime_seconds = clock.seconds();
  return r;
}

VerificationReport verify_l1_empiric(int num_classes, int n, double lambda, std::size_t trials, std::uint64_t seed,
                                     std::vector<double> label_dist) {
  if (num_classes < 2 || n < 1 || trials < 2) throw std::invalid_argument("verify_l1_empiric: need K >= 2, n >= 1, trials >= 2");
  if (!(lambda >= 0.0) || !(lambda / n < 0.68)) throw std::invalid_argument("verify_l1_empiric: need 0 <= lambda/n < 0.68");
  if (label_dist.empty()) label_dist.assign(static_cast<std::size_t>(num_classes), 1.0 / num_classes);
  if (label_dist.size() != static_cast<std::size_t>(num_classes)) {
    throw std::invalid_argument("verify_l1_empiric: label_dist must have K entries");
  }
  double mass = 0.0;
  for (double p : label_dist) {
    if (!(p >= 0.0)) throw std::invalid_argument("verify_l1_empiric: negative probability");
    mass += p;
  }
  if (std::abs(mass - 1.0) > 1e-12) throw std::invalid_argument("verify_l1_empiric: label_dist must sum to 1");

  Stopwatch clock;
  constexpr std::size_t kShards = 64;
  constexpr double kConfidence = 0.01;
  std::vector<double> exponent(trials);
  parallel_for(kShards, [&](std::size_t shard) {
    std::mt19937_64 rng(sub_seed(seed, shard));
    std::vector<int> u(static_cast<std::size_t>(num_classes));
    std::vector<int> v(static_cast<std::size_t>(num_classes));
    auto multinomial = [&](std::vector<int>& counts) {
      int left = n;
      double rest = 1.0;
      for (int k = 0; k + 1 < num_classes; ++k) {
        const double p = rest > 0.0 ? std::clamp(label_dist[k] / rest, 0.0, 1.0) : 0.0;
        counts[k] = left > 0 ? std::binomial_distribution<int>(left, p)(rng) : 0;
        left -= counts[k];
        rest -= label_dist[k];
      }
      counts[num_classes - 1] = left;
    };
    for (std::size_t t = shard; t < trials; t += kShards) {
      multinomial(u);
      multinomial(v);
      int l1 = 0;
      for (int k = 0; k < num_classes; ++k) l1 += std::abs(u[k] - v[k]);
      exponent[t] = lambda * l1 / n;
    }
  });

  // Scale by the largest exponent so every weight lies in (0, 1].
  const double top = *std::max_element(exponent.begin(), exponent.end());
  double sum = 0.0;
  for (double e : exponent) sum += std::exp(e - top);
  const double count = static_cast<double>(trials);
  const double mean = sum / count;
  double ss = 0.0;
  for (double e : exponent) {
    const double d = std::exp(e - top) - mean;
    ss += d * d;
  }
  const double var = ss / (count - 1.0);
  const double log_term = std::log(2.0 / kConfidence);
  const double ucb = std::min(1.0, mean + std::sqrt(2.0 * var * log_term / count) + 7.0 * log_term / (3.0 * (count - 1.0)));
  const double log_mgf = top + std::log(mean);
  const double log_ucb = top + std::log(ucb);
  const double bound = (num_classes + 2.0) / 2.0 + 6.0 * lambda * lambda / n;

  VerificationReport r;
  r.check = "l1_empiric";
  r.parameters = {{"K", num_classes}, {"n", n}, {"lambda", lambda}, {"trials", count},
                  {"seed", static_cast<double>(seed)}};
  r.add_part("99% UCB of log-MGF <= (K+2)/2 + 6 lambda^2/n", bound - log_ucb, 0.0,
             "ucb=" + std::to_string(log_ucb) + " bound=" + std::to_string(bound));
  r.add_part("log-MGF point estimate margin", bound - log_mgf, 0.0, "estimate=" + std::to_string(log_mgf), true);
  r.notes.push_back("weights exp(lambda L1 - max) lie in (0,1]; the empirical-Bernstein range uses the observed maximum");
  r.runtime_seconds = clock.seconds();
  return r;
}

namespace {

DiscreteConditional random_binary_table(int n, std::mt19937_64& rng) {
  DiscreteConditional q(n, 2, 2);
  std::gamma_distribution<double> g(0.7, 1.0);
  for (std::size_t row = 0; row < q.rows(); ++row) {
    double total = 0.0;
    for (auto& v : q.row(row)) total += (v = g(rng) + 1e-6);
    for (auto& v : q.row(row)) v /= total;
  }
  return q;
}

}  // namespace

VerificationReport verify_symmetric_prior_identities(int tables, std::uint64_t seed) {
  if (tables < 1) throw std::invalid_argument("verify_symmetric_prior_identities: tables must be >= 1");
  Stopwatch clock;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> label_p(0.2, 0.8);
  double worst_j = 0.0;
  double worst_t = 0.0;
  double worst_t_arbitrary = 0.0;
  for (int i = 0; i < tables; ++i) {
    const int n = 1 + i % 2;
    const double p1 = label_p(rng);
    const std::vector<double> mu{1.0 - p1, p1};
    const auto p = random_binary_table(n, rng);
    const double inf1 = infimum_kl_over_symmetric(p, mu, {SymmetryKind::type1, n, std::nullopt});
    worst_j = std::max(worst_j, std::abs(inf1 - conditional_mutual_information({mu, p}, ArrangementKind::J)));

    const double inf_arb = infimum_kl_over_symmetric(p, mu, {SymmetryKind::type2, n, std::nullopt});
    worst_t_arbitrary =
        std::max(worst_t_arbitrary, std::abs(inf_arb - conditional_mutual_information({mu, p}, ArrangementKind::T)));

    const auto perms = within_half_group(n);
    const auto pe = average_over(random_binary_table(n, rng), perms);
    const double inf2 = infimum_kl_over_symmetric(pe, mu, {SymmetryKind::type2, n, std::nullopt});
    worst_t = std::max(worst_t, std::abs(inf2 - conditional_mutual_information({mu, pe}, ArrangementKind::T)));
  }
  VerificationReport r;
  r.check = "symmetric_prior_identities";
  r.parameters = {{"tables", tables}, {"seed", static_cast<double>(seed)}};
  r.add_part("type-I infimum = I(J; Yhat | Y)", -worst_j, 1e-9);
  r.add_part("type-II infimum = I(T; Yhat | Y), half-exchangeable tables", -worst_t, 1e-9);
  r.add_part("type-II infimum vs I(T; Yhat | Y), arbitrary tables", -worst_t_arbitrary, 1e-9, {}, true);
  r.notes.push_back("the type-II identity needs tables exchangeable within each half, as every learner "
                    "whose output depends on the training set only as a multiset produces");
  r.runtime_seconds = clock.seconds();
  return r;
}

VerificationReport verify_discrete_expectation_bound(std::size_t draws, std::uint64_t seed) {
  Stopwatch clock;
  constexpr int kLevels = 4;
  constexpr int kThreshold = 2;
  constexpr double kFlip = 0.1;
  constexpr int kN = 3;
  const auto problem = threshold_problem(kLevels, kThreshold, kFlip);
  const auto c = check_discrete_expectation_bound(problem, kN, draws, seed);
  VerificationReport r;
  r.check = "discrete_expectation_bound";
  r.parameters = {{"levels", kLevels}, {"threshold", kThreshold}, {"flip", kFlip}, {"n", kN},
                  {"draws", static_cast<double>(draws)}, {"seed", static_cast<double>(seed)}};
  r.add_part("gap <= sqrt(2 I / n) + 3 SE", c.bound + 3.0 * c.gap.std_error - c.gap.mean, 0.0,
             "gap=" + std::to_string(c.gap.mean) + " se=" + std::to_string(c.gap.std_error) +
                 " I=" + std::to_string(c.mutual_information) + " bound=" + std::to_string(c.bound));
  r.runtime_seconds = clock.seconds();
  return r;
}

}  // namespace mdlb

#pragma once

#include "mdlb/discrete_conditional.hpp"
#include "mdlb/rearrangement.hpp"
#include "mdlb/verification.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mdlb {

/// Properties of h_D on a resolution x resolution grid:
/// (i) h_D(x,x') >= (x-x')^2 in nats, (ii) h_D(x,0) >= x in bits (the nats margin is
/// reported as information), (iii) h_D nondecreasing in x on [x',1], (iv) joint midpoint
/// convexity on resolution^2 random pairs. Throws std::invalid_argument if resolution < 100.
VerificationReport verify_hd_lemma(int resolution = 400, std::uint64_t seed = 0);

/// sum_j e^{n h_D(j/n,(V-j)/n)} C(n,j) C(n,V-j) / C(2n,V), in nats, log-domain.
double exp_hd_sum(int n, int v);

/// Checks exp_hd_sum(n, V) <= n (relative tolerance 1e-9) for every V in [1, 2n] and
/// n in [n_min, n_max]; n < 10 is evaluated but does not gate the result.
VerificationReport verify_exp_hd_sum(int n_min = 10, int n_max = 14);

/// lower <= value <= upper for every 1 <= j <= n-1, 2 <= n <= n_max.
VerificationReport verify_gallager(int n_max = 200);

/// Bucket(n,a,0) = 1 for n <= vandermonde_n_max; b_max's defining property for every
/// (n, a, delta) with n <= bmax_n_max, with Bucket also compared against exact integer sums.
VerificationReport verify_bucket(int vandermonde_n_max = 100, int bmax_n_max = 30);

/// Exponent of the Bucket summand at scale m against h_D(t/n,(a+b-t)/n), t in [b, a+b].
VerificationReport verify_bucket_asymptotics(int n = 10, int a = 2, int b = 1,
                                             std::vector<int> m_list = {10, 50, 250});

/// Monte Carlo check of log E exp(lambda ||p_hat - p_hat'||_1) <= (K+2)/2 + 6 lambda^2/n for
/// two independent size-n samples from label_dist (uniform if empty). The estimate is a 99%
/// empirical-Bernstein upper confidence bound computed in the log domain.
/// Throws std::invalid_argument unless lambda/n < 0.68.
VerificationReport verify_l1_empiric(int num_classes, int n, double lambda, std::size_t trials,
                                     std::uint64_t seed, std::vector<double> label_dist = {});

/// Infimum KL over type-I priors equals I(J; .|.) on random tables, and over type-II priors
/// equals I(T; .|.) on random tables exchangeable within each half (n in {1, 2}, binary).
VerificationReport verify_symmetric_prior_identities(int tables = 100, std::uint64_t seed = 0);

/// Monte Carlo expected gap of a threshold learner against sqrt(2 I(J; .|.) / n).
VerificationReport verify_discrete_expectation_bound(std::size_t draws = 10000, std::uint64_t seed = 0);

// Covering simulation.

inline constexpr std::size_t kCodebookBudget = std::size_t{1} << 22;

/// ceil(e^{m R}); throws std::length_error above kCodebookBudget.
std::size_t codebook_size(double rate, int blocks);

enum class CoverMode { lossless, lossy };

/// Label law, true prediction conditional and the prior codewords are drawn from.
struct CoveringSource {
  std::vector<double> label_dist;
  DiscreteConditional truth;
  DiscreteConditional prior;
};

struct CoveringOptions {
  int blocks = 8;
  ArrangementKind arrangement = ArrangementKind::J;
  CoverMode mode = CoverMode::lossless;
  double epsilon = 0.0;           // lossy threshold on the gap distortion
  bool explicit_codebook = false;  // lossless only: draw codewords instead of the geometric shortcut
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
};

struct CoveragePoint {
  double rate = 0.0;
  std::size_t codebook_size = 0;
  double coverage = 0.0;
  double std_error = 0.0;
};

struct CoverageCurve {
  std::vector<CoveragePoint> points;
  double kl = 0.0;                  // E_y D(truth || prior)
  double cross_entropy_rate = 0.0;  // E[-ln prior(arranged prediction | arranged labels)]

  /// Header rate,codebook_size,coverage,stderr.
  std::string to_csv() const;
};

/// For each trial draws the labels, predictions and arrangement of `blocks` independent
/// pairs, then a nested codebook from the prior given the arranged labels; a trial is
/// covered at rate R when one of the first ceil(e^{m R}) codewords matches (lossless) or
/// stays within epsilon of the arranged predictions' gap (lossy). Trials are shared by
/// all rates, so coverage is nondecreasing in R.
CoverageCurve covering_simulation(const CoveringSource& source, const CoveringOptions& options,
                                  std::span<const double> rates);

/// `count` evenly spaced rates from lo to hi inclusive.
std::vector<double> rate_sweep(double lo, double hi, int count);

/// One training and one ghost sample, binary labels; the learner memorizes the training
/// label and errs on the ghost one. The prior is its type-I symmetrization, so KL = ln 2.
CoveringSource memorizer_source();

/// Paired-seed monotonicity of coverage across a 6-point sweep around KL, and coverage at
/// KL + 0.5 beating max(KL - 0.5, 0) in at least 19 of `seeds` seeds.
VerificationReport verify_covering_monotonicity(int seeds = 20, std::size_t trials = 500,
                                                std::uint64_t seed = 0);

// Geometric compression.

struct GeometricDemo {
  std::vector<double> steps;       // quantization step q
  std::vector<double> lossless_mi;  // I(X_q; U_q) in nats, exact under uniform X
  std::array<double, 2> centers{-0.9, 1.1};
  double lossy_rate = 0.0;        // I(U_hat; X) in nats
  double lossy_distortion = 0.0;  // E|U - U_hat|
  double best_distortion = 0.0;   // with the half-interval means as centers
};

/// X ~ U[0,1], U = -1 + X/5 below 1/2 and 1 + X/5 above; U_hat picks a center per half.
GeometricDemo geometric_compression_demo(std::vector<double> steps = {0x1p-4, 0x1p-6, 0x1p-8, 0x1p-10,
                                                                      0x1p-12});

VerificationReport verify_geometric_demo();

}  // namespace mdlb

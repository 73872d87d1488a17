#pragma once

#include <numbers>

namespace mdlb {

/// Unit of an information quantity. Every routine computes in nats and
/// converts on the way out, so base2 results are the nats value divided by ln 2.
enum class LogBase { natural, base2 };

inline double from_nats(double nats, LogBase base) {
  return base == LogBase::natural ? nats : nats / std::numbers::ln2;
}

inline double to_nats(double value, LogBase base) {
  return base == LogBase::natural ? value : value * std::numbers::ln2;
}

/// h_b(x) = -x log x - (1-x) log(1-x), with 0 log 0 = 0.
/// Throws std::domain_error for x outside [0, 1].
double binary_entropy(double x, LogBase base = LogBase::natural);

/// h_D(x, x') = 2 h_b((x+x')/2) - h_b(x) - h_b(x'), i.e. twice the
/// Jensen-Shannon divergence between Bernoulli(x) and Bernoulli(x').
/// Range is [0, 2 log 2] in the requested base.
double h_d(double x, double x_prime, LogBase base = LogBase::natural);

/// Largest-branch inverse of h_D in its first argument: the unique
/// x in [x', 1] with h_D(x, x') = target. Bisection, |dx| <= 1e-12,
/// at most 200 iterations. `target` is measured in `base`.
/// Throws std::range_error if target > h_D(1, x').
double h_d_inverse(double x_prime, double target, LogBase base = LogBase::natural);

namespace detail {
inline constexpr double kInverseTolerance = 1e-12;
inline constexpr int kInverseMaxIterations = 200;
}  // namespace detail

}  // namespace mdlb

#include "mdlb/entropy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace mdlb {
namespace {

void require_probability(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error(std::string(what) + " must lie in [0, 1], got " + std::to_string(x));
  }
}

// x log x with the 0 log 0 = 0 convention.
double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double binary_entropy_nats(double x) { return -xlogx(x) - xlogx(1.0 - x); }

double h_d_nats(double x, double xp) {
  if (x > xp) std::swap(x, xp);  // same rounding for (x, x') and (x', x)
  const double v = 2.0 * binary_entropy_nats(0.5 * (x + xp)) - binary_entropy_nats(x) -
                   binary_entropy_nats(xp);
  // Concavity of h_b makes v >= 0; clamp rounding noise near the diagonal.
  return v > 0.0 ? v : 0.0;
}

}  // namespace

double binary_entropy(double x, LogBase base) {
  require_probability(x, "binary_entropy argument");
  return from_nats(binary_entropy_nats(x), base);
}

double h_d(double x, double x_prime, LogBase base) {
  require_probability(x, "h_d first argument");
  require_probability(x_prime, "h_d second argument");
  return from_nats(h_d_nats(x, x_prime), base);
}

double h_d_inverse(double x_prime, double target, LogBase base) {
  require_probability(x_prime, "h_d_inverse anchor");
  if (!(target >= 0.0)) {
    throw std::domain_error("h_d_inverse target must be non-negative");
  }
  const double goal = to_nats(target, base);
  const double ceiling = h_d_nats(1.0, x_prime);
  if (goal > ceiling) {
    throw std::range_error("h_d_inverse target " + std::to_string(target) +
                           " exceeds h_D(1, x') = " + std::to_string(from_nats(ceiling, base)));
  }
  if (goal == 0.0) return x_prime;
  if (goal == ceiling) return 1.0;

  double lo = x_prime;
  double hi = 1.0;
  for (int it = 0; it < detail::kInverseMaxIterations && hi - lo > detail::kInverseTolerance;
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (h_d_nats(mid, x_prime) < goal) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace mdlb

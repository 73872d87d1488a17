#include "mdlb/combinatorics.hpp"

#include "mdlb/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdlb {
namespace {

// Below this many factors the exact log-sum beats lgamma cancellation.
constexpr std::uint64_t kDirectSumLimit = 256;

}  // namespace

double log_choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) {
    throw std::domain_error("log_choose: k=" + std::to_string(k) + " exceeds n=" +
                            std::to_string(n));
  }
  const std::uint64_t r = std::min(k, n - k);
  if (r == 0) return 0.0;
  if (r <= kDirectSumLimit) {
    double acc = 0.0;
    for (std::uint64_t i = 0; i < r; ++i) {
      acc += std::log(static_cast<double>(n - i) / static_cast<double>(i + 1));
    }
    return acc;
  }
  const auto nd = static_cast<double>(n);
  const auto kd = static_cast<double>(k);
  return std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0);
}

double log_sum_exp(std::span<const double> values) {
  double top = -std::numeric_limits<double>::infinity();
  for (double v : values) top = std::max(top, v);
  if (!std::isfinite(top)) return top;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - top);
  return top + std::log(acc);
}

double bucket(std::uint64_t n, std::uint64_t a, std::uint64_t b) {
  const std::uint64_t total = a + b;
  if (total > 2 * n) {
    throw std::domain_error("bucket: a + b exceeds 2n");
  }
  // The range covers every nonzero term: the full Vandermonde sum, exactly 1.
  if (b + n <= std::max(total, n)) return 1.0;
  const double log_norm = log_choose(2 * n, total);
  std::vector<double> terms;
  terms.reserve(a + 1);
  for (std::uint64_t c = b; c <= total; ++c) {
    if (c > n || total - c > n) continue;
    terms.push_back(log_choose(n, c) + log_choose(n, total - c) - log_norm);
  }
  if (terms.empty()) return 0.0;
  return std::clamp(std::exp(log_sum_exp(terms)), 0.0, 1.0);
}

std::uint64_t b_max(std::uint64_t n, std::uint64_t a, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("b_max: delta must lie in (0, 1]");
  }
  if (a > n) throw std::invalid_argument("b_max: a must not exceed n");
  for (std::uint64_t b = n;; --b) {
    if (bucket(n, a, b) >= delta) return b;
    if (b == 0) break;
  }
  // Bucket(n, a, 0) == 1 >= delta, so the scan always stops above.
  throw std::logic_error("b_max: no qualifying b");
}

GallagerSandwich gallager_sandwich(std::uint64_t n, std::uint64_t j) {
  if (j == 0 || j >= n) {
    throw std::domain_error("gallager_sandwich requires 1 <= j <= n-1");
  }
  const auto nd = static_cast<double>(n);
  const auto jd = static_cast<double>(j);
  const double spread = jd * (nd - jd);
  GallagerSandwich s{};
  s.lower = std::sqrt(nd / (8.0 * spread));
  s.upper = std::sqrt(nd / (2.0 * std::numbers::pi * spread));
  s.value = std::exp(log_choose(n, j) - nd * binary_entropy(jd / nd));
  return s;
}

}  // namespace mdlb

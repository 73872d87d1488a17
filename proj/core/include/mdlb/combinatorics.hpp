#pragma once

#include <cstdint>
#include <span>

namespace mdlb {

/// ln C(n, k). Direct log-sum for small min(k, n-k), log-gamma otherwise.
/// Throws std::domain_error if k > n.
double log_choose(std::uint64_t n, std::uint64_t k);

/// log(sum exp(v)) with max-shift; -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> values);

/// Blum-Langford tail
///   Bucket(n, a, b) = sum_{c=b}^{a+b} C(n,c) C(n,a+b-c) / C(2n,a+b),
/// i.e. P(C >= b) for C hypergeometric with a+b draws from 2n (n marked).
/// Computed in the log domain. Throws std::domain_error if a + b > 2n.
double bucket(std::uint64_t n, std::uint64_t a, std::uint64_t b);

/// max{ b : Bucket(n, a, b) >= delta }, scanning b = n, n-1, ..., 0.
/// Throws std::invalid_argument unless 0 < delta <= 1 and a <= n.
std::uint64_t b_max(std::uint64_t n, std::uint64_t a, double delta);

/// Stirling-type sandwich on C(n,j) e^{-n h_b(j/n)} (nats).
struct GallagerSandwich {
  double lower;  // sqrt(n / (8 j (n-j)))
  double value;  // C(n,j) exp(-n h_b(j/n))
  double upper;  // sqrt(n / (2 pi j (n-j)))

  bool holds() const { return lower <= value && value <= upper; }
};

/// Throws std::domain_error unless 1 <= j <= n-1.
GallagerSandwich gallager_sandwich(std::uint64_t n, std::uint64_t j);

}  // namespace mdlb

#include "mdlb/divergence.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mdlb {
namespace {

constexpr double kNormalizationTolerance = 1e-12;

void require_distribution(std::span<const double> p, const char* name) {
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw std::invalid_argument(std::string(name) + " has a negative entry");
    total += v;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw std::invalid_argument(std::string(name) + " does not sum to 1");
  }
}

}  // namespace

double kl_diag_gaussian(const DiagGaussian& p, const DiagGaussian& q) {
  if (p.mean.size() != p.var.size() || q.mean.size() != q.var.size() ||
      p.mean.size() != q.mean.size()) {
    throw std::invalid_argument("kl_diag_gaussian: dimension mismatch");
  }
  if ((p.var.array() <= 0.0).any() || (q.var.array() <= 0.0).any()) {
    throw std::invalid_argument("kl_diag_gaussian: variances must be strictly positive");
  }
  double kl = 0.0;
  for (Eigen::Index j = 0; j < p.dim(); ++j) {
    const double d = p.mean[j] - q.mean[j];
    kl += 0.5 * ((p.var[j] + d * d) / q.var[j] - 1.0 + std::log(q.var[j] / p.var[j]));
  }
  return kl;
}

double kl_categorical(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("kl_categorical: length mismatch");
  require_distribution(p, "kl_categorical: p");
  require_distribution(q, "kl_categorical: q");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    kl += p[i] * std::log(p[i] / q[i]);
  }
  return kl > 0.0 ? kl : 0.0;
}

}  // namespace mdlb

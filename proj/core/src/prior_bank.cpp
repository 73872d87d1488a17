#include "mdlb/prior_bank.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mdlb {

PriorBank::PriorBank(int num_classes, int centers_per_class, int latent_dim, double alpha, BankMode mode)
    : num_classes_(num_classes), centers_(centers_per_class), latent_dim_(latent_dim), alpha_(alpha), mode_(mode) {
  if (num_classes < 1 || centers_per_class < 1 || latent_dim < 1) {
    throw std::invalid_argument("PriorBank: sizes must be positive");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("PriorBank: alpha must lie in [0, 1]");
  bank_.assign(static_cast<std::size_t>(num_classes * centers_per_class), DiagGaussian::standard(latent_dim));
}

std::size_t PriorBank::index(int k, int r) const {
  if (k < 0 || k >= num_classes_ || r < 0 || r >= centers_) {
    throw std::out_of_range("PriorBank: center index out of range");
  }
  return static_cast<std::size_t>(k * centers_ + r);
}

double lossy_regularizer(const DiagGaussian& g, const DiagGaussian& c) {
  if (g.dim() != c.dim()) throw std::invalid_argument("lossy_regularizer: dimension mismatch");
  const Eigen::ArrayXd ratio = g.var.array() / c.var.array();
  const double mean_part = 0.5 * (g.mean - c.mean).squaredNorm();
  const double var_part = 0.5 * (ratio - 1.0 - ratio.log()).sum();
  return mean_part + std::max(var_part, 0.0);
}

double PriorBank::regularizer(const DiagGaussian& g, int k, int r) const {
  const auto& c = center(k, r);
  return mode_ == BankMode::lossless ? kl_diag_gaussian(g, c) : lossy_regularizer(g, c);
}

int assign_center(const DiagGaussian& g, int k, const PriorBank& bank) {
  int best = 0;
  double best_value = bank.regularizer(g, k, 0);
  for (int r = 1; r < bank.centers_per_class(); ++r) {
    const double v = bank.regularizer(g, k, r);
    if (v < best_value) {
      best_value = v;
      best = r;
    }
  }
  return best;
}

void update_bank(PriorBank& bank, std::span<const BankSample> batch) {
  const int k_total = bank.num_classes();
  const int m_total = bank.centers_per_class();
  std::vector<int> counts(static_cast<std::size_t>(k_total * m_total), 0);
  std::vector<DiagGaussian> sums(counts.size(), {Eigen::VectorXd::Zero(bank.latent_dim()),
                                                 Eigen::VectorXd::Zero(bank.latent_dim())});
  for (const auto& s : batch) {
    if (s.label < 0 || s.label >= k_total || s.center < 0 || s.center >= m_total) {
      throw std::out_of_range("update_bank: sample assigned outside the bank");
    }
    if (s.encoding->dim() != bank.latent_dim()) throw std::invalid_argument("update_bank: dimension mismatch");
    const auto i = static_cast<std::size_t>(s.label * m_total + s.center);
    ++counts[i];
    sums[i].mean += s.encoding->mean;
    sums[i].var += s.encoding->var;
  }
  for (int k = 0; k < k_total; ++k) {
    for (int r = 0; r < m_total; ++r) {
      const auto i = static_cast<std::size_t>(k * m_total + r);
      if (counts[i] == 0) continue;
      const double keep = 1.0 - bank.alpha() * counts[i];
      if (keep < -1e-12) {
        throw std::invalid_argument("update_bank: alpha * b_{k,r} = " + std::to_string(1.0 - keep) +
                                    " exceeds 1");
      }
      auto& c = bank.center(k, r);
      c.mean = std::max(keep, 0.0) * c.mean + bank.alpha() * sums[i].mean;
      c.var = std::max(keep, 0.0) * c.var + bank.alpha() * sums[i].var;
    }
  }
}

}  // namespace mdlb

#pragma once

#include "mdlb/divergence.hpp"

#include <span>
#include <vector>

namespace mdlb {

enum class BankMode {
  lossless,  // regularizer KL(N(mu, s2) || N(mu_c, s2_c))
  lossy,     // KL(N(mu, I) || N(mu_c, I)) + KL(N(0, s2) || N(0, s2_c))
};

/// K x M Gaussian centers with moving-average updates.
class PriorBank {
 public:
  /// Every center starts at N(0, I).
  PriorBank(int num_classes, int centers_per_class, int latent_dim, double alpha,
            BankMode mode = BankMode::lossless);

  int num_classes() const { return num_classes_; }
  int centers_per_class() const { return centers_; }
  int latent_dim() const { return latent_dim_; }
  double alpha() const { return alpha_; }
  BankMode mode() const { return mode_; }

  const DiagGaussian& center(int k, int r) const { return bank_.at(index(k, r)); }
  DiagGaussian& center(int k, int r) { return bank_.at(index(k, r)); }

  /// Regularizer of `g` against center (k, r) under this bank's mode, in nats.
  double regularizer(const DiagGaussian& g, int k, int r) const;

 private:
  std::size_t index(int k, int r) const;

  int num_classes_;
  int centers_;
  int latent_dim_;
  double alpha_;
  BankMode mode_;
  std::vector<DiagGaussian> bank_;
};

/// KL(N(mu, I) || N(mu_c, I)) + KL(N(0, diag s2) || N(0, diag s2_c)).
double lossy_regularizer(const DiagGaussian& g, const DiagGaussian& center);

/// argmin_r of the bank regularizer within class k; ties go to the lowest index.
int assign_center(const DiagGaussian& g, int k, const PriorBank& bank);

struct BankSample {
  int label;
  int center;
  const DiagGaussian* encoding;
};

/// Moving-average update of every center that received samples.
/// Throws std::invalid_argument if alpha * b_{k,r} > 1 for some center.
void update_bank(PriorBank& bank, std::span<const BankSample> batch);

}  // namespace mdlb

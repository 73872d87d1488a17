#pragma once

#include <Eigen/Core>

#include <span>

namespace mdlb {

/// Gaussian with diagonal covariance. `var` holds variances, not std-devs.
struct DiagGaussian {
  Eigen::VectorXd mean;
  Eigen::VectorXd var;

  Eigen::Index dim() const { return mean.size(); }

  static DiagGaussian standard(Eigen::Index dim) {
    return {Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim)};
  }
};

/// Closed-form D_KL(p || q) in nats for diagonal Gaussians.
/// Throws std::invalid_argument on dimension mismatch or a non-positive variance.
double kl_diag_gaussian(const DiagGaussian& p, const DiagGaussian& q);

/// D_KL(p || q) in nats for probability vectors, with 0 log(0/q) = 0.
/// Returns +infinity when p puts mass where q has none.
/// Both inputs must sum to 1 within 1e-12 and have equal length.
double kl_categorical(std::span<const double> p, std::span<const double> q);

}  // namespace mdlb

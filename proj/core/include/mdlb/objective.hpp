#pragma once

#include "mdlb/dataset.hpp"
#include "mdlb/model.hpp"
#include "mdlb/prior_bank.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mdlb {

enum class Objective { vib, cdvib_lossless, cdvib_lossy };

std::string to_string(Objective objective);
/// Accepts "vib", "cdvib_lossless", "cdvib_lossy" (and kebab-case). Throws std::invalid_argument.
Objective objective_from_string(std::string_view name);
/// Bank mode an objective needs; vib ignores the bank.
BankMode bank_mode_for(Objective objective);

/// Per-sample regularizer and the center it was measured against
/// (always 0 for vib, whose prior is N(0, I)).
struct Regularized {
  double value = 0.0;
  int center = 0;
};
Regularized sample_regularizer(Objective objective, const DiagGaussian& g, int label, const PriorBank& bank);

struct ObjectiveResult {
  double loss = 0.0;                // mean of beta * regularizer + cross-entropy
  double mean_regularizer = 0.0;
  double mean_cross_entropy = 0.0;
  std::size_t correct = 0;          // argmax of the sampled prediction equals the label
  Model gradient;
  std::vector<DiagGaussian> encodings;
  std::vector<int> centers;
};

/// Batch loss and its exact gradient with respect to every model tensor.
/// `noise` is latent_dim x batch.size(); column i drives sample i's latent draw.
/// Bank centers are constants here. Throws std::runtime_error on a non-finite loss.
ObjectiveResult objective(const Model& model, const PriorBank& bank, Objective objective, double beta,
                          const Dataset& data, std::span<const std::size_t> batch,
                          const Eigen::MatrixXd& noise);

struct TensorGradientError {
  std::string name;
  double relative_error = 0.0;  // ||analytic - numeric|| / max(||analytic||, ||numeric||)
};

/// Compares the analytic gradient with central differences of the loss at step h.
/// Bank assignments are frozen to those of the unperturbed model.
std::vector<TensorGradientError> gradient_check(const Model& model, const PriorBank& bank, Objective objective,
                                                double beta, const Dataset& data,
                                                std::span<const std::size_t> batch,
                                                const Eigen::MatrixXd& noise, double h = 1e-5);

}  // namespace mdlb

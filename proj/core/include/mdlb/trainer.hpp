#pragma once

#include "mdlb/dataset.hpp"
#include "mdlb/model.hpp"
#include "mdlb/objective.hpp"
#include "mdlb/prior_bank.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mdlb {

struct TrainConfig {
  Objective objective = Objective::vib;
  double beta = 1e-3;
  double alpha = 0.005;
  int centers = 1;
  int latent_dim = 8;
  int hidden = 32;
  int batch_size = 64;
  int epochs = 20;
  double learning_rate = 0.05;
  double lr_decay = 0.97;  // per epoch
  std::uint64_t seed = 0;
  int test_samples = 12;

  /// Throws std::invalid_argument; alpha * batch_size must not exceed 1.
  void validate() const;
};

struct HistoryRow {
  int epoch = 0;
  std::string split;  // "train" or "test"
  double accuracy = 0.0;
  double loss = 0.0;
  double mean_kl = 0.0;
};

/// Predictions averaged over `samples` latent draws per input.
struct Evaluation {
  double accuracy = 0.0;            // argmax of the averaged prediction
  double loss = 0.0;                // beta * mean_kl + mean_cross_entropy
  double mean_kl = 0.0;
  double mean_cross_entropy = 0.0;  // -log of the averaged probability of the true label
  std::vector<double> prob_correct;
  std::vector<double> regularizer;
};

Evaluation evaluate(const Model& model, const PriorBank& bank, Objective objective, double beta,
                    const Dataset& data, int samples, std::uint64_t seed);

struct TrainResult {
  Model model;
  PriorBank bank;
  std::vector<HistoryRow> history;
  bool diverged = false;
  std::string message;
};

/// Shuffled mini-batch SGD; each step updates parameters first, then the bank.
/// Epoch 0 in the history is the initial state. On a non-finite loss training
/// stops and the last finite state is returned with `diverged` set.
TrainResult train(const TrainConfig& config, const Dataset& train, const Dataset* test = nullptr);

/// CSV with header epoch,split,accuracy,loss,mean_kl.
std::string history_csv(const std::vector<HistoryRow>& history);

struct Checkpoint {
  Model model;
  PriorBank bank{1, 1, 1, 0.0};
  TrainConfig config;
  std::string data_json = "{}";  // generator description, opaque to the library
};

std::string to_json(const Checkpoint& checkpoint);
/// Throws std::invalid_argument on a schema or shape mismatch.
Checkpoint checkpoint_from_json(const std::string& text);

}  // namespace mdlb

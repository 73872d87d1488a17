#pragma once

#include "mdlb/divergence.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>

namespace mdlb {

inline constexpr double kLeakySlope = 0.1;

struct ModelShape {
  int input_dim = 2;
  int hidden = 32;
  int latent = 8;
  int classes = 2;

  bool operator==(const ModelShape&) const = default;
};

/// x -> LeakyReLU(w1 x + b1) = h -> (mu = w_mu h + b_mu, log sigma^2 = w_logvar h + b_logvar).
struct EncoderParams {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd w_mu;
  Eigen::VectorXd b_mu;
  Eigen::MatrixXd w_logvar;
  Eigen::VectorXd b_logvar;
};

/// u -> softmax(w u + b).
struct DecoderParams {
  Eigen::MatrixXd w;
  Eigen::VectorXd b;
};

/// Encoder plus decoder. Also used as the gradient container.
struct Model {
  EncoderParams encoder;
  DecoderParams decoder;

  ModelShape shape() const;

  static Model zeros(const ModelShape& shape);
  /// Xavier-uniform weights, zero biases.
  static Model xavier(const ModelShape& shape, std::uint64_t seed);

  /// Visits every tensor as (name, data pointer, element count).
  template <class F>
  void for_each_tensor(F&& f) {
    f("encoder.w1", encoder.w1.data(), encoder.w1.size());
    f("encoder.b1", encoder.b1.data(), encoder.b1.size());
    f("encoder.w_mu", encoder.w_mu.data(), encoder.w_mu.size());
    f("encoder.b_mu", encoder.b_mu.data(), encoder.b_mu.size());
    f("encoder.w_logvar", encoder.w_logvar.data(), encoder.w_logvar.size());
    f("encoder.b_logvar", encoder.b_logvar.data(), encoder.b_logvar.size());
    f("decoder.w", decoder.w.data(), decoder.w.size());
    f("decoder.b", decoder.b.data(), decoder.b.size());
  }
  template <class F>
  void for_each_tensor(F&& f) const {
    const_cast<Model*>(this)->for_each_tensor(
        [&](const char* name, double* data, Eigen::Index size) { f(name, static_cast<const double*>(data), size); });
  }

  /// this += scale * other.
  void add_scaled(const Model& other, double scale);
  bool all_finite() const;
};

/// Throws std::invalid_argument on a dimension mismatch and std::runtime_error
/// on non-finite output.
DiagGaussian encoder_forward(const EncoderParams& params, const Eigen::VectorXd& x);

/// u = mean + sqrt(var) * noise.
Eigen::VectorXd sample_latent(const DiagGaussian& g, const Eigen::VectorXd& noise);

/// Class probabilities softmax(w u + b).
Eigen::VectorXd decoder_forward(const DecoderParams& params, const Eigen::VectorXd& u);

/// Numerically stable softmax.
Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

}  // namespace mdlb

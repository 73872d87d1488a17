#include "mdlb/model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace mdlb {

ModelShape Model::shape() const {
  return {static_cast<int>(encoder.w1.cols()), static_cast<int>(encoder.w1.rows()),
          static_cast<int>(encoder.w_mu.rows()), static_cast<int>(decoder.w.rows())};
}

Model Model::zeros(const ModelShape& s) {
  if (s.input_dim < 1 || s.hidden < 1 || s.latent < 1 || s.classes < 2) {
    throw std::invalid_argument("ModelShape: dimensions must be positive and classes >= 2");
  }
  Model m;
  m.encoder.w1 = Eigen::MatrixXd::Zero(s.hidden, s.input_dim);
  m.encoder.b1 = Eigen::VectorXd::Zero(s.hidden);
  m.encoder.w_mu = Eigen::MatrixXd::Zero(s.latent, s.hidden);
  m.encoder.b_mu = Eigen::VectorXd::Zero(s.latent);
  m.encoder.w_logvar = Eigen::MatrixXd::Zero(s.latent, s.hidden);
  m.encoder.b_logvar = Eigen::VectorXd::Zero(s.latent);
  m.decoder.w = Eigen::MatrixXd::Zero(s.classes, s.latent);
  m.decoder.b = Eigen::VectorXd::Zero(s.classes);
  return m;
}

Model Model::xavier(const ModelShape& s, std::uint64_t seed) {
  Model m = zeros(s);
  std::mt19937_64 rng(seed);
  auto fill = [&](Eigen::MatrixXd& w) {
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    std::uniform_real_distribution<double> u(-limit, limit);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = u(rng);
  };
  fill(m.encoder.w1);
  fill(m.encoder.w_mu);
  fill(m.encoder.w_logvar);
  fill(m.decoder.w);
  return m;
}

void Model::add_scaled(const Model& other, double scale) {
  if (!(shape() == other.shape())) throw std::invalid_argument("Model::add_scaled: shape mismatch");
  encoder.w1 += scale * other.encoder.w1;
  encoder.b1 += scale * other.encoder.b1;
  encoder.w_mu += scale * other.encoder.w_mu;
  encoder.b_mu += scale * other.encoder.b_mu;
  encoder.w_logvar += scale * other.encoder.w_logvar;
  encoder.b_logvar += scale * other.encoder.b_logvar;
  decoder.w += scale * other.decoder.w;
  decoder.b += scale * other.decoder.b;
}

bool Model::all_finite() const {
  bool ok = true;
  for_each_tensor([&](const char*, const double* data, Eigen::Index size) {
    for (Eigen::Index i = 0; i < size && ok; ++i) ok = std::isfinite(data[i]);
  });
  return ok;
}

DiagGaussian encoder_forward(const EncoderParams& p, const Eigen::VectorXd& x) {
  if (x.size() != p.w1.cols()) throw std::invalid_argument("encoder_forward: input dimension mismatch");
  const Eigen::VectorXd a = p.w1 * x + p.b1;
  const Eigen::VectorXd h = a.unaryExpr([](double v) { return v > 0.0 ? v : kLeakySlope * v; });
  DiagGaussian g{p.w_mu * h + p.b_mu, (p.w_logvar * h + p.b_logvar).array().exp().matrix()};
  if (!g.mean.allFinite() || !g.var.allFinite() || (g.var.array() <= 0.0).any()) {
    throw std::runtime_error("encoder_forward: non-finite output");
  }
  return g;
}

Eigen::VectorXd sample_latent(const DiagGaussian& g, const Eigen::VectorXd& noise) {
  if (noise.size() != g.mean.size() || g.var.size() != g.mean.size()) {
    throw std::invalid_argument("sample_latent: dimension mismatch");
  }
  return g.mean + (g.var.array().sqrt() * noise.array()).matrix();
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  const double top = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - top).exp().matrix();
  return e / e.sum();
}

Eigen::VectorXd decoder_forward(const DecoderParams& p, const Eigen::VectorXd& u) {
  if (u.size() != p.w.cols()) throw std::invalid_argument("decoder_forward: latent dimension mismatch");
  return softmax(p.w * u + p.b);
}

}  // namespace mdlb

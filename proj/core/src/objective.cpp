#include "mdlb/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdlb {

std::string to_string(Objective objective) {
  switch (objective) {
    case Objective::vib: return "vib";
    case Objective::cdvib_lossless: return "cdvib_lossless";
    case Objective::cdvib_lossy: return "cdvib_lossy";
  }
  return "?";
}

Objective objective_from_string(std::string_view name) {
  if (name == "vib") return Objective::vib;
  if (name == "cdvib_lossless" || name == "cdvib-lossless") return Objective::cdvib_lossless;
  if (name == "cdvib_lossy" || name == "cdvib-lossy") return Objective::cdvib_lossy;
  throw std::invalid_argument("unknown objective '" + std::string(name) + "'");
}

BankMode bank_mode_for(Objective objective) {
  return objective == Objective::cdvib_lossy ? BankMode::lossy : BankMode::lossless;
}

Regularized sample_regularizer(Objective objective, const DiagGaussian& g, int label, const PriorBank& bank) {
  if (objective == Objective::vib) return {kl_diag_gaussian(g, DiagGaussian::standard(g.dim())), 0};
  const int r = assign_center(g, label, bank);
  return {bank.regularizer(g, label, r), r};
}

ObjectiveResult objective(const Model& model, const PriorBank& bank, Objective objective, double beta,
                          const Dataset& data, std::span<const std::size_t> batch,
                          const Eigen::MatrixXd& noise) {
  if (batch.empty()) throw std::invalid_argument("objective: empty batch");
  const ModelShape shape = model.shape();
  if (noise.rows() != shape.latent || noise.cols() != static_cast<Eigen::Index>(batch.size())) {
    throw std::invalid_argument("objective: noise must be latent_dim x batch_size");
  }
  if (data.dim() != shape.input_dim) throw std::invalid_argument("objective: input dimension mismatch");
  if (objective != Objective::vib) {
    if (bank.mode() != bank_mode_for(objective)) throw std::invalid_argument("objective: bank mode mismatch");
    if (bank.latent_dim() != shape.latent || bank.num_classes() != shape.classes) {
      throw std::invalid_argument("objective: bank shape mismatch");
    }
  }

  const auto& enc = model.encoder;
  const auto& dec = model.decoder;
  const double inv_b = 1.0 / static_cast<double>(batch.size());

  ObjectiveResult out;
  out.gradient = Model::zeros(shape);
  auto& g_enc = out.gradient.encoder;
  auto& g_dec = out.gradient.decoder;
  out.encodings.reserve(batch.size());
  out.centers.reserve(batch.size());

  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(batch[i]);
    if (batch[i] >= data.size()) throw std::out_of_range("objective: batch index out of range");
    const int y = data.labels[batch[i]];
    if (y < 0 || y >= shape.classes) throw std::invalid_argument("objective: label outside [0, K)");
    const Eigen::VectorXd x = data.features.row(row).transpose();

    // Forward.
    const Eigen::VectorXd a1 = enc.w1 * x + enc.b1;
    const Eigen::VectorXd h = a1.unaryExpr([](double v) { return v > 0.0 ? v : kLeakySlope * v; });
    const Eigen::VectorXd mu = enc.w_mu * h + enc.b_mu;
    const Eigen::VectorXd logvar = enc.w_logvar * h + enc.b_logvar;
    const Eigen::VectorXd var = logvar.array().exp().matrix();
    const Eigen::VectorXd sd = (0.5 * logvar.array()).exp().matrix();
    const Eigen::VectorXd eps = noise.col(static_cast<Eigen::Index>(i));
    const Eigen::VectorXd u = mu + (sd.array() * eps.array()).matrix();
    const Eigen::VectorXd logits = dec.w * u + dec.b;
    const Eigen::VectorXd p = softmax(logits);

    DiagGaussian g{mu, var};
    const Regularized reg = sample_regularizer(objective, g, y, bank);
    const double top = logits.maxCoeff();
    const double ce = top + std::log((logits.array() - top).exp().sum()) - logits(y);
    out.loss += inv_b * (beta * reg.value + ce);
    out.mean_regularizer += inv_b * reg.value;
    out.mean_cross_entropy += inv_b * ce;
    Eigen::Index arg = 0;
    p.maxCoeff(&arg);
    if (arg == y) ++out.correct;

    // Backward through softmax cross-entropy.
    Eigen::VectorXd d_logits = p;
    d_logits(y) -= 1.0;
    d_logits *= inv_b;
    g_dec.w.noalias() += d_logits * u.transpose();
    g_dec.b += d_logits;
    const Eigen::VectorXd d_u = dec.w.transpose() * d_logits;

    // Reparameterization: u = mu + exp(logvar / 2) * eps.
    Eigen::VectorXd d_mu = d_u;
    Eigen::VectorXd d_logvar = (0.5 * d_u.array() * eps.array() * sd.array()).matrix();

    // Regularizer gradients; centers are constants.
    const double w = beta * inv_b;
    if (objective == Objective::vib) {
      d_mu += w * mu;
      d_logvar += (w * 0.5 * (var.array() - 1.0)).matrix();
    } else {
      const auto& c = bank.center(y, reg.center);
      const Eigen::ArrayXd ratio = var.array() / c.var.array();
      if (objective == Objective::cdvib_lossless) {
        d_mu += (w * (mu - c.mean).array() / c.var.array()).matrix();
      } else {
        d_mu += w * (mu - c.mean);
      }
      d_logvar += (w * 0.5 * (ratio - 1.0)).matrix();
    }

    g_enc.w_mu.noalias() += d_mu * h.transpose();
    g_enc.b_mu += d_mu;
    g_enc.w_logvar.noalias() += d_logvar * h.transpose();
    g_enc.b_logvar += d_logvar;
    const Eigen::VectorXd d_h = enc.w_mu.transpose() * d_mu + enc.w_logvar.transpose() * d_logvar;
    const Eigen::VectorXd d_a1 =
        (d_h.array() * a1.array().unaryExpr([](double v) { return v > 0.0 ? 1.0 : kLeakySlope; })).matrix();
    g_enc.w1.noalias() += d_a1 * x.transpose();
    g_enc.b1 += d_a1;

    out.encodings.push_back(std::move(g));
    out.centers.push_back(reg.center);
  }
  if (!std::isfinite(out.loss)) throw std::runtime_error("objective: non-finite loss");
  return out;
}

}  // namespace mdlb

namespace mdlb {

std::vector<TensorGradientError> gradient_check(const Model& model, const PriorBank& bank, Objective objective_kind,
                                                double beta, const Dataset& data,
                                                std::span<const std::size_t> batch,
                                                const Eigen::MatrixXd& noise, double h) {
  const auto base = objective(model, bank, objective_kind, beta, data, batch, noise);
  // A perturbation could move a sample to another center; pin each sample to
  // its original one by shrinking the bank to that center.
  auto loss_at = [&](const Model& m) {
    if (objective_kind == Objective::vib || bank.centers_per_class() == 1) {
      return objective(m, bank, objective_kind, beta, data, batch, noise).loss;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const int y = data.labels[batch[i]];
      PriorBank pinned(bank.num_classes(), 1, bank.latent_dim(), bank.alpha(), bank.mode());
      pinned.center(y, 0) = bank.center(y, base.centers[i]);
      const std::size_t one[] = {batch[i]};
      const Eigen::MatrixXd col = noise.col(static_cast<Eigen::Index>(i));
      total += objective(m, pinned, objective_kind, beta, data, one, col).loss;
    }
    return total / static_cast<double>(batch.size());
  };

  std::vector<TensorGradientError> out;
  Model probe = model;
  std::vector<double*> probe_tensors;
  probe.for_each_tensor([&](const char*, double* data_ptr, Eigen::Index) { probe_tensors.push_back(data_ptr); });
  std::size_t t = 0;
  base.gradient.for_each_tensor([&](const char* name, const double* analytic, Eigen::Index size) {
    double* p = probe_tensors[t++];
    double diff = 0.0;
    double norm_a = 0.0;
    double norm_n = 0.0;
    for (Eigen::Index i = 0; i < size; ++i) {
      const double keep = p[i];
      p[i] = keep + h;
      const double up = loss_at(probe);
      p[i] = keep - h;
      const double down = loss_at(probe);
      p[i] = keep;
      const double numeric = (up - down) / (2.0 * h);
      diff += (analytic[i] - numeric) * (analytic[i] - numeric);
      norm_a += analytic[i] * analytic[i];
      norm_n += numeric * numeric;
    }
    const double scale = std::max({std::sqrt(norm_a), std::sqrt(norm_n), 1e-300});
    out.push_back({name, std::sqrt(diff) / scale});
  });
  return out;
}

}  // namespace mdlb

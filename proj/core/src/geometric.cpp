#include "mdlb/entropy.hpp"
#include "mdlb/oracle_sim.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace mdlb {
namespace {

constexpr double kSplit = 0.5;

double latent(double x) { return (x < kSplit ? -1.0 : 1.0) + x / 5.0; }

// Integral of |alpha + x/5| over [lo, hi].
double abs_linear_integral(double alpha, double lo, double hi) {
  auto primitive = [&](double x) { return alpha * x + x * x / 10.0; };
  const double root = -5.0 * alpha;
  if (root <= lo || root >= hi) return std::abs(primitive(hi) - primitive(lo));
  return std::abs(primitive(root) - primitive(lo)) + std::abs(primitive(hi) - primitive(root));
}

double distortion(double c0, double c1) {
  return abs_linear_integral(-1.0 - c0, 0.0, kSplit) + abs_linear_integral(1.0 - c1, kSplit, 1.0);
}

double entropy_of(const std::map<long, double>& p) {
  double h = 0.0;
  for (const auto& [k, v] : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

// Exact I(X_q; U_q) for X uniform on [0,1] and bins of width q.
double quantized_mi(double q) {
  const auto cells = static_cast<long>(std::llround(1.0 / q));
  if (std::abs(cells * q - 1.0) > 1e-12 || cells % 2 != 0) {
    throw std::invalid_argument("geometric demo: 1/q must be an even integer");
  }
  std::map<long, double> u_marginal;
  double joint_entropy = 0.0;
  for (long i = 0; i < cells; ++i) {
    // U is increasing on each half, so a cell maps to [u(lo), u(lo) + q/5).
    const double u_lo = latent(i * q);
    const double u_hi = u_lo + q / 5.0;
    for (long k = static_cast<long>(std::floor(u_lo / q)); k * q < u_hi; ++k) {
      const double overlap = std::min(u_hi, (k + 1) * q) - std::max(u_lo, k * q);
      if (overlap <= 0.0) continue;
      const double mass = 5.0 * overlap;  // dx = 5 du
      u_marginal[k] += mass;
      joint_entropy -= mass * std::log(mass);
    }
  }
  const double x_entropy = std::log(static_cast<double>(cells));
  return x_entropy + entropy_of(u_marginal) - joint_entropy;
}

}  // namespace

GeometricDemo geometric_compression_demo(std::vector<double> steps) {
  GeometricDemo d;
  d.steps = std::move(steps);
  for (double q : d.steps) d.lossless_mi.push_back(quantized_mi(q));
  // U_hat is a deterministic function of which half X falls in.
  d.lossy_rate = binary_entropy(kSplit);
  d.lossy_distortion = distortion(d.centers[0], d.centers[1]);
  d.best_distortion = distortion(latent(kSplit / 2.0), latent((1.0 + kSplit) / 2.0));
  return d;
}

VerificationReport verify_geometric_demo() {
  const auto start = std::chrono::steady_clock::now();
  const auto d = geometric_compression_demo();
  VerificationReport r;
  r.check = "geometric_compression";
  r.parameters = {{"center_low", d.centers[0]}, {"center_high", d.centers[1]}};
  r.add_part("lossy rate = 1 bit", -std::abs(d.lossy_rate - std::numbers::ln2), 1e-12,
             "rate=" + std::to_string(d.lossy_rate) + " nats");
  r.add_part("lossy distortion <= 0.05", 0.05 - d.lossy_distortion, 1e-12,
             "distortion=" + std::to_string(d.lossy_distortion));
  double rise = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < d.lossless_mi.size(); ++i) rise = std::min(rise, d.lossless_mi[i] - d.lossless_mi[i - 1]);
  r.add_part("quantized lossless MI strictly increasing as q shrinks", rise > 0.0 ? rise : -1.0, 0.0);
  r.add_part("distortion with half-interval means", 0.05 - d.best_distortion, 0.0,
             "distortion=" + std::to_string(d.best_distortion), true);
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    r.notes.push_back("q=" + std::to_string(d.steps[i]) + " I(X_q;U_q)=" + std::to_string(d.lossless_mi[i]) + " nats");
  }
  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace mdlb

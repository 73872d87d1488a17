#include "mdlb/rearrangement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace mdlb {
namespace {

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

}  // namespace

std::vector<std::vector<int>> arrangements(ArrangementKind kind, int n) {
  if (n < 1) throw std::invalid_argument("arrangements: n must be >= 1");
  if (n > 3) throw std::length_error("arrangements: n > 3 exceeds the enumeration budget");
  std::vector<std::vector<int>> out;
  if (kind == ArrangementKind::J) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      std::vector<int> pos(static_cast<std::size_t>(2 * n));
      for (int i = 0; i < n; ++i) {
        const bool swapped = mask & (1u << i);
        pos[static_cast<std::size_t>(i)] = swapped ? i + n : i;
        pos[static_cast<std::size_t>(i + n)] = swapped ? i : i + n;
      }
      out.push_back(std::move(pos));
    }
    return out;
  }
  // T: choose the positions of the training block; both blocks keep their order.
  for (unsigned mask = 0; mask < (1u << (2 * n)); ++mask) {
    if (std::popcount(mask) != n) continue;
    std::vector<int> pos;
    pos.reserve(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < 2 * n; ++i) {
      if (mask & (1u << i)) pos.push_back(i);
    }
    for (int i = 0; i < 2 * n; ++i) {
      if (!(mask & (1u << i))) pos.push_back(i);
    }
    out.push_back(std::move(pos));
  }
  return out;
}

double conditional_mutual_information(const RearrangementJoint& joint, ArrangementKind kind) {
  const auto& p = joint.predictor;
  const auto arr = arrangements(kind, p.n());
  if (static_cast<int>(joint.label_dist.size()) != p.label_alphabet()) {
    throw std::invalid_argument("conditional_mutual_information: label distribution size mismatch");
  }

  // The observed vector at position pos[k] is the original sample k, so the
  // original vector is v_k = v~_{pos[k]}: a permuted_codes lookup by pos.
  std::vector<std::vector<std::size_t>> row_maps;
  std::vector<std::vector<std::size_t>> col_maps;
  for (const auto& pos : arr) {
    row_maps.push_back(permuted_codes(p.label_codec(), pos));
    col_maps.push_back(permuted_codes(p.pred_codec(), pos));
  }

  double h_given_arrangement = 0.0;
  double h_marginal = 0.0;
  std::vector<double> weights(arr.size());
  std::vector<double> mixture(p.cols());
  for (std::size_t yt = 0; yt < p.rows(); ++yt) {
    double total = 0.0;
    for (std::size_t a = 0; a < arr.size(); ++a) {
      weights[a] = label_vector_probability(p.label_codec(), row_maps[a][yt], joint.label_dist) /
                   static_cast<double>(arr.size());
      total += weights[a];
    }
    if (total == 0.0) continue;

    std::fill(mixture.begin(), mixture.end(), 0.0);
    for (std::size_t a = 0; a < arr.size(); ++a) {
      if (weights[a] == 0.0) continue;
      const auto row = p.row(row_maps[a][yt]);
      h_given_arrangement += weights[a] * entropy(row);
      const double w = weights[a] / total;
      for (std::size_t c = 0; c < p.cols(); ++c) mixture[c] += w * row[col_maps[a][c]];
    }
    h_marginal += total * entropy(mixture);
  }
  return std::max(h_marginal - h_given_arrangement, 0.0);
}

}  // namespace mdlb

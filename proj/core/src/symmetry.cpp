#include "mdlb/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mdlb {
namespace {

constexpr std::size_t kMaxPermutedCells = std::size_t{1} << 27;

void check_half_length(int n) {
  if (n < 1) throw std::invalid_argument("permutation group: n must be >= 1");
  if (n > kMaxSymmetryHalfLength) {
    throw std::length_error("permutation group: n > 3 exceeds the enumeration budget");
  }
}

Permutation identity(int len) {
  Permutation p(static_cast<std::size_t>(len));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

std::vector<std::vector<std::size_t>> code_maps(const VectorCodec& codec,
                                                std::span<const Permutation> perms) {
  if (perms.size() * codec.size() > kMaxPermutedCells) {
    throw std::length_error("permutation group too large for this table");
  }
  std::vector<std::vector<std::size_t>> maps;
  maps.reserve(perms.size());
  for (const auto& p : perms) maps.push_back(permuted_codes(codec, p));
  return maps;
}

void check_spec(const DiscreteConditional& q, const PermutationSpec& spec) {
  if (spec.n != q.n()) throw std::invalid_argument("PermutationSpec.n does not match the table");
  check_half_length(spec.n);
  if (spec.labels) {
    if (static_cast<int>(spec.labels->size()) != q.length()) {
      throw std::invalid_argument("PermutationSpec.labels has the wrong length");
    }
    for (int y : *spec.labels) {
      if (y < 0 || y >= q.label_alphabet()) {
        throw std::invalid_argument("PermutationSpec.labels outside the label alphabet");
      }
    }
  }
}

// Row-wise groups: for type1/type2 the same group for all rows.
std::vector<Permutation> spec_group(const PermutationSpec& spec) {
  switch (spec.kind) {
    case SymmetryKind::type1: return type1_group(spec.n);
    case SymmetryKind::type2: return full_group(spec.n);
    case SymmetryKind::type3: break;
  }
  throw std::logic_error("spec_group called for type3");
}

// Rows touched by a type3 spec, paired with their stabilizers.
std::vector<std::size_t> type3_rows(const DiscreteConditional& q, const PermutationSpec& spec) {
  if (spec.labels) return {q.label_codec().encode(*spec.labels)};
  std::vector<std::size_t> rows(q.rows());
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

}  // namespace

std::vector<Permutation> type1_group(int n) {
  check_half_length(n);
  std::vector<Permutation> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Permutation p = identity(2 * n);
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(i + n)]);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Permutation> full_group(int n) {
  check_half_length(n);
  std::vector<Permutation> out;
  Permutation p = identity(2 * n);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<Permutation> label_stabilizer(std::span<const int> labels) {
  if (labels.size() % 2 != 0 || labels.empty()) {
    throw std::invalid_argument("label_stabilizer: labels must have even positive length");
  }
  std::vector<Permutation> out;
  for (auto& p : full_group(static_cast<int>(labels.size() / 2))) {
    bool keeps = true;
    for (std::size_t i = 0; i < p.size() && keeps; ++i) {
      keeps = labels[static_cast<std::size_t>(p[i])] == labels[i];
    }
    if (keeps) out.push_back(std::move(p));
  }
  return out;
}

std::vector<Permutation> within_half_group(int n) {
  std::vector<Permutation> out;
  for (auto& p : full_group(n)) {
    bool keeps = true;
    for (int i = 0; i < 2 * n && keeps; ++i) keeps = (p[static_cast<std::size_t>(i)] < n) == (i < n);
    if (keeps) out.push_back(std::move(p));
  }
  return out;
}

SymmetryCheck check_symmetry(const DiscreteConditional& q, const PermutationSpec& spec) {
  check_spec(q, spec);
  SymmetryCheck result;
  auto note = [&](double a, double b) {
    result.max_violation = std::max(result.max_violation, std::abs(a - b));
  };

  if (spec.kind == SymmetryKind::type3) {
    for (std::size_t r : type3_rows(q, spec)) {
      const auto labels = q.label_codec().decode(r);
      const auto perms = label_stabilizer(labels);
      for (const auto& col_map : code_maps(q.pred_codec(), perms)) {
        for (std::size_t c = 0; c < q.cols(); ++c) note(q(r, col_map[c]), q(r, c));
      }
    }
  } else {
    const auto perms = spec_group(spec);
    const auto row_maps = code_maps(q.label_codec(), perms);
    const auto col_maps = code_maps(q.pred_codec(), perms);
    for (std::size_t g = 0; g < perms.size(); ++g) {
      for (std::size_t r = 0; r < q.rows(); ++r) {
        const std::size_t rp = row_maps[g][r];
        for (std::size_t c = 0; c < q.cols(); ++c) note(q(rp, col_maps[g][c]), q(r, c));
      }
    }
  }
  result.symmetric = result.max_violation <= kSymmetryTolerance;
  return result;
}

DiscreteConditional average_over(const DiscreteConditional& q, std::span<const Permutation> perms) {
  if (perms.empty()) throw std::invalid_argument("average_over: empty permutation list");
  const auto row_maps = code_maps(q.label_codec(), perms);
  const auto col_maps = code_maps(q.pred_codec(), perms);
  DiscreteConditional out(q.n(), q.label_alphabet(), q.pred_alphabet());
  const double w = 1.0 / static_cast<double>(perms.size());
  for (std::size_t r = 0; r < q.rows(); ++r) {
    auto dst = out.row(r);
    for (std::size_t g = 0; g < perms.size(); ++g) {
      const std::size_t rp = row_maps[g][r];
      for (std::size_t c = 0; c < q.cols(); ++c) dst[c] += w * q(rp, col_maps[g][c]);
    }
  }
  return out;
}

DiscreteConditional symmetrize(const DiscreteConditional& q, const PermutationSpec& spec) {
  check_spec(q, spec);
  if (spec.kind != SymmetryKind::type3) {
    const auto perms = spec_group(spec);
    return average_over(q, perms);
  }
  DiscreteConditional out = q;
  for (std::size_t r : type3_rows(q, spec)) {
    const auto perms = label_stabilizer(q.label_codec().decode(r));
    const auto col_maps = code_maps(q.pred_codec(), perms);
    auto dst = out.row(r);
    std::fill(dst.begin(), dst.end(), 0.0);
    const double w = 1.0 / static_cast<double>(perms.size());
    for (const auto& col_map : col_maps) {
      for (std::size_t c = 0; c < q.cols(); ++c) dst[c] += w * q(r, col_map[c]);
    }
  }
  return out;
}

double expected_row_kl(const DiscreteConditional& p, const DiscreteConditional& q,
                       std::span<const double> label_dist) {
  if (!p.same_shape(q)) throw std::invalid_argument("expected_row_kl: shape mismatch");
  double total = 0.0;
  for (std::size_t r = 0; r < p.rows(); ++r) {
    const double weight = label_vector_probability(p.label_codec(), r, label_dist);
    if (weight == 0.0) continue;
    double kl = 0.0;
    for (std::size_t c = 0; c < p.cols(); ++c) {
      const double a = p(r, c);
      if (a == 0.0) continue;
      const double b = q(r, c);
      if (b == 0.0) return std::numeric_limits<double>::infinity();
      kl += a * std::log(a / b);
    }
    total += weight * std::max(kl, 0.0);
  }
  return total;
}

double infimum_kl_over_symmetric(const DiscreteConditional& p, std::span<const double> label_dist,
                                 const PermutationSpec& spec) {
  return expected_row_kl(p, symmetrize(p, spec), label_dist);
}

}  // namespace mdlb

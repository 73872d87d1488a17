#pragma once

#include "mdlb/discrete_conditional.hpp"

#include <optional>
#include <span>
#include <vector>

namespace mdlb {

enum class SymmetryKind {
  type1,  // independent swaps of positions i and i+n
  type2,  // every permutation of the 2n positions
  type3,  // permutations that keep the label vector fixed
};

/// A permutation acts on vectors by (v_pi)_i = v_{pi(i)}.
using Permutation = std::vector<int>;

struct PermutationSpec {
  SymmetryKind kind = SymmetryKind::type1;
  int n = 1;
  /// For type3: restrict to the stabilizer of this label vector (one row).
  /// Without it, every row is checked against its own stabilizer.
  std::optional<std::vector<int>> labels;
};

inline constexpr int kMaxSymmetryHalfLength = 3;
inline constexpr double kSymmetryTolerance = 1e-12;

/// Enumerates the group. Throws std::length_error past the enumeration caps.
std::vector<Permutation> type1_group(int n);
std::vector<Permutation> full_group(int n);
std::vector<Permutation> label_stabilizer(std::span<const int> labels);
/// Permutations that reorder the training half and the ghost half separately.
std::vector<Permutation> within_half_group(int n);

struct SymmetryCheck {
  bool symmetric = true;
  double max_violation = 0.0;
};

SymmetryCheck check_symmetry(const DiscreteConditional& q, const PermutationSpec& spec);

/// Group average of Q(yhat_pi | y_pi).
DiscreteConditional symmetrize(const DiscreteConditional& q, const PermutationSpec& spec);

/// Average of Q(yhat_pi | y_pi) over an arbitrary list of permutations.
/// The result is invariant only when the list is a group.
DiscreteConditional average_over(const DiscreteConditional& q, std::span<const Permutation> perms);

/// E_y D_KL(p(.|y) || symmetrize(p)(.|y)) in nats, skipping zero-probability label vectors.
double infimum_kl_over_symmetric(const DiscreteConditional& p, std::span<const double> label_dist,
                                 const PermutationSpec& spec);

/// E_y D_KL(p(.|y) || q(.|y)) in nats.
double expected_row_kl(const DiscreteConditional& p, const DiscreteConditional& q,
                       std::span<const double> label_dist);

}  // namespace mdlb

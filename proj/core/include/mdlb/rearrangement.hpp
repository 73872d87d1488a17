#pragma once

#include "mdlb/discrete_conditional.hpp"

#include <vector>

namespace mdlb {

/// Which hidden arrangement of train and ghost samples is measured.
enum class ArrangementKind {
  J,  // independent coin per pair decides which of positions i, i+n holds the training sample
  T,  // uniformly random n-subset of the 2n positions holds the training samples
};

/// Labels drawn i.i.d. from label_dist; predictions drawn from predictor(.|y) where
/// positions 0..n-1 are the training samples and n..2n-1 the ghost samples.
struct RearrangementJoint {
  std::vector<double> label_dist;
  DiscreteConditional predictor;
};

/// pos[k] = position that sample k occupies after the arrangement.
std::vector<std::vector<int>> arrangements(ArrangementKind kind, int n);

/// Exact I(A; Yhat~ | Y~) in nats, where Y~ and Yhat~ are the rearranged label and
/// prediction vectors, computed as H(Yhat~|Y~) - H(Yhat~|Y~,A) by full enumeration.
/// Throws std::length_error for n > 3.
double conditional_mutual_information(const RearrangementJoint& joint, ArrangementKind kind);

}  // namespace mdlb

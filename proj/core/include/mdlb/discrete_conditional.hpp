#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mdlb {

/// Mixed-radix codec for fixed-length vectors over {0, ..., base-1}.
/// Position 0 is the least significant digit.
class VectorCodec {
 public:
  VectorCodec(int length, int base);

  int length() const { return length_; }
  int base() const { return base_; }
  std::size_t size() const { return size_; }

  std::size_t encode(std::span<const int> digits) const;
  std::vector<int> decode(std::size_t code) const;
  void decode_into(std::size_t code, std::span<int> out) const;

 private:
  int length_;
  int base_;
  std::size_t size_;
};

/// Exact conditional table Q(yhat^{2n} | y^{2n}) on small alphabets.
/// Rows are indexed by the code of the label vector, columns by the code of
/// the prediction vector; positions 0..n-1 are the training half and
/// n..2n-1 the ghost half.
class DiscreteConditional {
 public:
  static constexpr std::size_t kMaxColumns = std::size_t{1} << 20;
  static constexpr std::size_t kMaxCells = std::size_t{1} << 24;
  static constexpr double kRowTolerance = 1e-12;

  /// All-zero table; fill it and call validate().
  DiscreteConditional(int n, int label_alphabet, int pred_alphabet);
  /// Takes ownership of a row-major table and validates it.
  DiscreteConditional(int n, int label_alphabet, int pred_alphabet, std::vector<double> table);

  static DiscreteConditional uniform(int n, int label_alphabet, int pred_alphabet);
  /// Q(yhat | y) = prod_i marginal[y_i][yhat_i].
  static DiscreteConditional product(int n, const std::vector<std::vector<double>>& marginal);

  int n() const { return n_; }
  int length() const { return 2 * n_; }
  int label_alphabet() const { return labels_.base(); }
  int pred_alphabet() const { return preds_.base(); }
  std::size_t rows() const { return labels_.size(); }
  std::size_t cols() const { return preds_.size(); }
  const VectorCodec& label_codec() const { return labels_; }
  const VectorCodec& pred_codec() const { return preds_; }

  double operator()(std::size_t y, std::size_t yhat) const { return table_[y * cols() + yhat]; }
  double& at(std::size_t y, std::size_t yhat) { return table_[y * cols() + yhat]; }
  std::span<const double> row(std::size_t y) const { return {table_.data() + y * cols(), cols()}; }
  std::span<double> row(std::size_t y) { return {table_.data() + y * cols(), cols()}; }
  const std::vector<double>& table() const { return table_; }

  /// Throws std::invalid_argument if an entry is negative or a row does not sum to 1.
  void validate() const;
  bool same_shape(const DiscreteConditional& other) const;

  std::string to_json() const;
  static DiscreteConditional from_json(const std::string& text);

 private:
  int n_;
  VectorCodec labels_;
  VectorCodec preds_;
  std::vector<double> table_;
};

/// For every code, the code of the vector v' with v'_i = v_{perm[i]}.
std::vector<std::size_t> permuted_codes(const VectorCodec& codec, std::span<const int> perm);

/// Probability of a label vector under the i.i.d. label law.
double label_vector_probability(const VectorCodec& codec, std::size_t code,
                                std::span<const double> label_dist);

}  // namespace mdlb

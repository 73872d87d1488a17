#include "mdlb/discrete_conditional.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <stdexcept>

namespace mdlb {

VectorCodec::VectorCodec(int length, int base) : length_(length), base_(base), size_(1) {
  if (length < 0 || base < 1) throw std::invalid_argument("VectorCodec: bad shape");
  for (int i = 0; i < length; ++i) {
    if (size_ > (std::size_t{1} << 40) / static_cast<std::size_t>(base)) {
      throw std::length_error("VectorCodec: alphabet^length too large to enumerate");
    }
    size_ *= static_cast<std::size_t>(base);
  }
}

std::size_t VectorCodec::encode(std::span<const int> digits) const {
  if (static_cast<int>(digits.size()) != length_) {
    throw std::invalid_argument("VectorCodec::encode: wrong length");
  }
  std::size_t code = 0;
  for (int i = length_ - 1; i >= 0; --i) {
    const int d = digits[static_cast<std::size_t>(i)];
    if (d < 0 || d >= base_) throw std::invalid_argument("VectorCodec::encode: digit out of range");
    code = code * static_cast<std::size_t>(base_) + static_cast<std::size_t>(d);
  }
  return code;
}

std::vector<int> VectorCodec::decode(std::size_t code) const {
  std::vector<int> out(static_cast<std::size_t>(length_));
  decode_into(code, out);
  return out;
}

void VectorCodec::decode_into(std::size_t code, std::span<int> out) const {
  for (int i = 0; i < length_; ++i) {
    out[static_cast<std::size_t>(i)] = static_cast<int>(code % static_cast<std::size_t>(base_));
    code /= static_cast<std::size_t>(base_);
  }
}

DiscreteConditional::DiscreteConditional(int n, int label_alphabet, int pred_alphabet)
    : n_(n), labels_(2 * n, label_alphabet), preds_(2 * n, pred_alphabet) {
  if (n < 1) throw std::invalid_argument("DiscreteConditional: n must be >= 1");
  if (preds_.size() > kMaxColumns || labels_.size() * preds_.size() > kMaxCells) {
    throw std::length_error("DiscreteConditional: table exceeds the enumeration budget");
  }
  table_.assign(labels_.size() * preds_.size(), 0.0);
}

DiscreteConditional::DiscreteConditional(int n, int label_alphabet, int pred_alphabet,
                                         std::vector<double> table)
    : DiscreteConditional(n, label_alphabet, pred_alphabet) {
  if (table.size() != table_.size()) {
    throw std::invalid_argument("DiscreteConditional: table has the wrong number of entries");
  }
  table_ = std::move(table);
  validate();
}

DiscreteConditional DiscreteConditional::uniform(int n, int label_alphabet, int pred_alphabet) {
  DiscreteConditional q(n, label_alphabet, pred_alphabet);
  const double w = 1.0 / static_cast<double>(q.cols());
  std::fill(q.table_.begin(), q.table_.end(), w);
  return q;
}

DiscreteConditional DiscreteConditional::product(int n,
                                                 const std::vector<std::vector<double>>& marginal) {
  if (marginal.empty() || marginal.front().empty()) {
    throw std::invalid_argument("DiscreteConditional::product: empty marginal");
  }
  const int k = static_cast<int>(marginal.size());
  const int p = static_cast<int>(marginal.front().size());
  DiscreteConditional q(n, k, p);
  std::vector<int> y(static_cast<std::size_t>(2 * n));
  std::vector<int> yh(static_cast<std::size_t>(2 * n));
  for (std::size_t r = 0; r < q.rows(); ++r) {
    q.labels_.decode_into(r, y);
    for (std::size_t c = 0; c < q.cols(); ++c) {
      q.preds_.decode_into(c, yh);
      double v = 1.0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        v *= marginal.at(static_cast<std::size_t>(y[i])).at(static_cast<std::size_t>(yh[i]));
      }
      q.at(r, c) = v;
    }
  }
  q.validate();
  return q;
}

void DiscreteConditional::validate() const {
  for (std::size_t r = 0; r < rows(); ++r) {
    double total = 0.0;
    for (double v : row(r)) {
      if (!(v >= 0.0)) throw std::invalid_argument("DiscreteConditional: negative entry");
      total += v;
    }
    if (std::abs(total - 1.0) > kRowTolerance * static_cast<double>(cols())) {
      throw std::invalid_argument("DiscreteConditional: row " + std::to_string(r) +
                                  " sums to " + std::to_string(total));
    }
  }
}

bool DiscreteConditional::same_shape(const DiscreteConditional& other) const {
  return n_ == other.n_ && label_alphabet() == other.label_alphabet() &&
         pred_alphabet() == other.pred_alphabet();
}

std::string DiscreteConditional::to_json() const {
  nlohmann::json j;
  j["n"] = n_;
  j["label_alphabet"] = label_alphabet();
  j["pred_alphabet"] = pred_alphabet();
  auto& rows_json = j["table"] = nlohmann::json::array();
  for (std::size_t r = 0; r < rows(); ++r) {
    rows_json.push_back(std::vector<double>(row(r).begin(), row(r).end()));
  }
  return j.dump();
}

DiscreteConditional DiscreteConditional::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const int n = j.at("n").get<int>();
  DiscreteConditional q(n, j.at("label_alphabet").get<int>(), j.at("pred_alphabet").get<int>());
  const auto& rows_json = j.at("table");
  if (rows_json.size() != q.rows()) {
    throw std::invalid_argument("DiscreteConditional JSON: wrong number of rows");
  }
  for (std::size_t r = 0; r < q.rows(); ++r) {
    const auto values = rows_json[r].get<std::vector<double>>();
    if (values.size() != q.cols()) {
      throw std::invalid_argument("DiscreteConditional JSON: wrong row length");
    }
    std::copy(values.begin(), values.end(), q.row(r).begin());
  }
  q.validate();
  return q;
}

std::vector<std::size_t> permuted_codes(const VectorCodec& codec, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != codec.length()) {
    throw std::invalid_argument("permuted_codes: permutation has the wrong length");
  }
  std::vector<std::size_t> stride(perm.size());
  std::size_t s = 1;
  for (auto& v : stride) {
    v = s;
    s *= static_cast<std::size_t>(codec.base());
  }
  std::vector<std::size_t> out(codec.size());
  std::vector<int> digits(perm.size());
  for (std::size_t c = 0; c < codec.size(); ++c) {
    codec.decode_into(c, digits);
    std::size_t code = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      code += static_cast<std::size_t>(digits[static_cast<std::size_t>(perm[i])]) * stride[i];
    }
    out[c] = code;
  }
  return out;
}

double label_vector_probability(const VectorCodec& codec, std::size_t code,
                                std::span<const double> label_dist) {
  if (static_cast<int>(label_dist.size()) != codec.base()) {
    throw std::invalid_argument("label distribution size does not match the label alphabet");
  }
  double p = 1.0;
  for (int i = 0; i < codec.length(); ++i) {
    p *= label_dist[code % static_cast<std::size_t>(codec.base())];
    code /= static_cast<std::size_t>(codec.base());
  }
  return p;
}

}  // namespace mdlb

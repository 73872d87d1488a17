#include "mdlb/dataset.hpp"

#include "mdlb/rng.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mdlb {
namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

void Dataset::validate() const {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw std::invalid_argument("Dataset: feature rows and labels differ in count");
  }
  if (num_classes < 1 && !labels.empty()) throw std::invalid_argument("Dataset: num_classes < 1");
  for (int y : labels) {
    if (y < 0 || y >= num_classes) throw std::invalid_argument("Dataset: label outside [0, K)");
  }
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
  Dataset out;
  out.num_classes = num_classes;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(static_cast<Eigen::Index>(rows.at(i)));
    out.labels.push_back(labels.at(rows[i]));
  }
  return out;
}

void GeneratorSpec::validate() const {
  if (num_classes < 2) throw std::invalid_argument("GeneratorSpec: need at least 2 classes");
  if (!(stddev > 0.0)) throw std::invalid_argument("GeneratorSpec: stddev must be positive");
  if (!class_weights.empty()) {
    if (static_cast<int>(class_weights.size()) != num_classes) {
      throw std::invalid_argument("GeneratorSpec: class_weights needs one entry per class");
    }
    for (double w : class_weights) {
      if (!(w >= 0.0)) throw std::invalid_argument("GeneratorSpec: negative class weight");
    }
  }
  if (kind == GeneratorKind::gaussian_mixture) {
    if (dim < 1) throw std::invalid_argument("GeneratorSpec: dim must be >= 1");
    if (static_cast<int>(means.size()) != num_classes) {
      throw std::invalid_argument("GeneratorSpec: need one mean per class");
    }
    for (const auto& m : means) {
      if (m.size() != dim) throw std::invalid_argument("GeneratorSpec: mean has the wrong dimension");
    }
  } else {
    if (dim != 2) throw std::invalid_argument("GeneratorSpec: rings are 2-dimensional");
    if (static_cast<int>(radii.size()) != num_classes) {
      throw std::invalid_argument("GeneratorSpec: need one radius per class");
    }
  }
}

GeneratorSpec GeneratorSpec::two_blobs(double half_separation, double stddev) {
  GeneratorSpec s;
  s.num_classes = 2;
  s.dim = 2;
  s.stddev = stddev;
  s.means = {Eigen::Vector2d(-half_separation, 0.0), Eigen::Vector2d(half_separation, 0.0)};
  return s;
}

GeneratorSpec GeneratorSpec::four_corners(double a, double stddev) {
  GeneratorSpec s;
  s.num_classes = 4;
  s.dim = 2;
  s.stddev = stddev;
  s.means = {Eigen::Vector2d(-a, -a), Eigen::Vector2d(a, -a), Eigen::Vector2d(-a, a),
             Eigen::Vector2d(a, a)};
  return s;
}

GeneratorSpec GeneratorSpec::rings(int num_classes, double stddev) {
  GeneratorSpec s;
  s.kind = GeneratorKind::rings;
  s.num_classes = num_classes;
  s.dim = 2;
  s.stddev = stddev;
  for (int k = 0; k < num_classes; ++k) s.radii.push_back(1.0 + k);
  return s;
}

double four_corners_bayes_accuracy(double a, double stddev) {
  const double p = normal_cdf(a / stddev);
  return p * p;
}

double two_blobs_bayes_accuracy(double half_separation, double stddev) {
  return normal_cdf(half_separation / stddev);
}

double four_corners_ratio_for_accuracy(double accuracy) {
  if (!(accuracy > 0.25 && accuracy < 1.0)) {
    throw std::invalid_argument("four_corners_ratio_for_accuracy: accuracy must lie in (0.25, 1)");
  }
  // Phi(r) = sqrt(accuracy)  =>  r = sqrt(2) erf^{-1}(2 sqrt(accuracy) - 1)
  return std::numbers::sqrt2 * boost::math::erf_inv(2.0 * std::sqrt(accuracy) - 1.0);
}

Dataset synth_dataset(const GeneratorSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<double> weights = spec.class_weights;
  if (weights.empty()) weights.assign(static_cast<std::size_t>(spec.num_classes), 1.0);
  std::discrete_distribution<int> pick(weights.begin(), weights.end());

  Dataset d;
  d.num_classes = spec.num_classes;
  d.features.resize(static_cast<Eigen::Index>(n), spec.dim);
  d.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int k = pick(rng);
    d.labels[i] = k;
    const auto row = static_cast<Eigen::Index>(i);
    if (spec.kind == GeneratorKind::gaussian_mixture) {
      for (int j = 0; j < spec.dim; ++j) {
        d.features(row, j) = spec.means[static_cast<std::size_t>(k)](j) + spec.stddev * normal(rng);
      }
    } else {
      const double r = spec.radii[static_cast<std::size_t>(k)] + spec.stddev * normal(rng);
      const double t = angle(rng);
      d.features(row, 0) = r * std::cos(t);
      d.features(row, 1) = r * std::sin(t);
    }
  }
  return d;
}

DataSplit synth_split(const GeneratorSpec& spec, std::size_t n_train, std::size_t n_ghost,
                      std::uint64_t seed) {
  return {synth_dataset(spec, n_train, sub_seed(seed, 0)), synth_dataset(spec, n_ghost, sub_seed(seed, 1))};
}

std::string to_csv(const Dataset& data) {
  data.validate();
  std::ostringstream out;
  out << std::setprecision(17);
  for (Eigen::Index j = 0; j < data.dim(); ++j) out << 'x' << j << ',';
  out << "label\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (Eigen::Index j = 0; j < data.dim(); ++j) out << data.features(static_cast<Eigen::Index>(i), j) << ',';
    out << data.labels[i] << '\n';
  }
  return out.str();
}

Dataset from_csv(const std::string& text, int num_classes) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("dataset CSV: missing header");
  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
  }
  if (header.size() < 2 || header.back() != "label") {
    throw std::invalid_argument("dataset CSV: header must be x0,...,label");
  }
  const std::size_t d = header.size() - 1;
  std::vector<double> values;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(ls, cell, ',')) {
      if (col < d) {
        values.push_back(std::stod(cell));
      } else if (col == d) {
        labels.push_back(std::stoi(cell));
      }
      ++col;
    }
    if (col != d + 1) throw std::invalid_argument("dataset CSV: ragged row");
  }
  Dataset out;
  out.num_classes = num_classes;
  out.labels = std::move(labels);
  out.features.resize(static_cast<Eigen::Index>(out.labels.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < out.labels.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      out.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * d + j];
    }
  }
  out.validate();
  return out;
}

Dataset read_csv(const std::filesystem::path& path, int num_classes) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_csv(buf.str(), num_classes);
}

}  // namespace mdlb

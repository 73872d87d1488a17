#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mdlb {

/// Labelled feature matrix; labels are 0-based class indices.
struct Dataset {
  Eigen::MatrixXd features;  // n x d_in
  std::vector<int> labels;
  int num_classes = 0;

  std::size_t size() const { return labels.size(); }
  Eigen::Index dim() const { return features.cols(); }
  /// Throws std::invalid_argument on a row/label count mismatch or a label outside [0, K).
  void validate() const;
  Dataset subset(const std::vector<std::size_t>& rows) const;
};

enum class GeneratorKind { gaussian_mixture, rings };

/// Synthetic class-conditional generator.
/// gaussian_mixture: x ~ N(means[k], stddev^2 I).
/// rings: 2-D, radius radii[k] + stddev * N(0,1), uniform angle.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::gaussian_mixture;
  int num_classes = 2;
  int dim = 2;
  std::vector<Eigen::VectorXd> means;
  std::vector<double> radii;
  double stddev = 1.0;
  std::vector<double> class_weights;  // empty = uniform

  void validate() const;

  /// Means at +-(half_separation, 0), unit variance.
  static GeneratorSpec two_blobs(double half_separation, double stddev = 1.0);
  /// Four classes at (+-a, +-a).
  static GeneratorSpec four_corners(double a, double stddev);
  static GeneratorSpec rings(int num_classes, double stddev);
};

/// Bayes accuracy of four_corners(a, stddev): Phi(a / stddev)^2.
double four_corners_bayes_accuracy(double a, double stddev);
/// Bayes accuracy of two_blobs(h, stddev): Phi(h / stddev).
double two_blobs_bayes_accuracy(double half_separation, double stddev);
/// a / stddev such that four_corners_bayes_accuracy equals `accuracy`.
double four_corners_ratio_for_accuracy(double accuracy);

Dataset synth_dataset(const GeneratorSpec& spec, std::size_t n, std::uint64_t seed);

struct DataSplit {
  Dataset train;
  Dataset ghost;
};

/// Train and ghost sets from the same generator with disjoint sub-seeds.
DataSplit synth_split(const GeneratorSpec& spec, std::size_t n_train, std::size_t n_ghost,
                      std::uint64_t seed);

/// CSV with header x0,...,x{d-1},label.
std::string to_csv(const Dataset& data);
Dataset from_csv(const std::string& text, int num_classes);
Dataset read_csv(const std::filesystem::path& path, int num_classes);

}  // namespace mdlb

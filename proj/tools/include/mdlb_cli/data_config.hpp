#pragma once

#include "mdlb/dataset.hpp"
#include "mdlb_cli/config.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>

namespace mdlb::cli {

/// Synthetic data description shared by `train` (config [data]) and `bound-report`
/// (regenerated from the checkpoint).
struct DataConfig {
  std::string generator = "two-blobs";  // two-blobs | four-corners | rings
  long long n_train = 2000;
  long long n_test = 2000;
  double separation = 1.0;  // two-blobs half separation, four-corners offset
  double stddev = 1.0;
  int classes = 3;  // rings only

  GeneratorSpec spec() const;
  int num_classes() const;
  /// Throws ConfigError.
  void validate() const;
};

DataConfig read_data_config(Section& section);
nlohmann::json data_to_json(const DataConfig& data, std::uint64_t seed);
/// Throws ConfigError when the description is missing or malformed.
DataConfig data_from_json(const nlohmann::json& j, std::uint64_t& seed);

}  // namespace mdlb::cli

#include "mdlb_cli/data_config.hpp"

namespace mdlb::cli {

GeneratorSpec DataConfig::spec() const {
  if (generator == "two-blobs") return GeneratorSpec::two_blobs(separation, stddev);
  if (generator == "four-corners") return GeneratorSpec::four_corners(separation, stddev);
  if (generator == "rings") return GeneratorSpec::rings(classes, stddev);
  throw ConfigError("unknown generator '" + generator + "' (two-blobs, four-corners, rings)");
}

int DataConfig::num_classes() const { return spec().num_classes; }

void DataConfig::validate() const {
  if (n_train < 1 || n_test < 1) throw ConfigError("data.n-train and data.n-test must be >= 1");
  if (!(stddev > 0.0)) throw ConfigError("data.stddev must be > 0");
  try {
    spec().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("data: ") + e.what());
  }
}

DataConfig read_data_config(Section& s) {
  DataConfig d;
  d.generator = s.get_string("generator", d.generator);
  d.n_train = s.get_int("n-train", d.n_train);
  d.n_test = s.get_int("n-test", d.n_test);
  d.separation = s.get_double("separation", d.separation);
  d.stddev = s.get_double("stddev", d.stddev);
  d.classes = static_cast<int>(s.get_int("classes", d.classes));
  s.finish();
  d.validate();
  return d;
}

nlohmann::json data_to_json(const DataConfig& d, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["generator"] = d.generator;
  j["n-train"] = d.n_train;
  j["n-test"] = d.n_test;
  j["separation"] = d.separation;
  j["stddev"] = d.stddev;
  j["classes"] = d.classes;
  j["seed"] = seed;
  return j;
}

DataConfig data_from_json(const nlohmann::json& j, std::uint64_t& seed) {
  if (!j.is_object() || !j.contains("generator")) {
    throw ConfigError("checkpoint carries no data description; pass --train and --ghost");
  }
  Section s(j, "checkpoint data");
  seed = static_cast<std::uint64_t>(s.get_int("seed", 0));
  return read_data_config(s);
}

}  // namespace mdlb::cli

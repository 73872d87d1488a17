#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdlb::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigFile {
  std::filesystem::path path;
  std::string text;  // raw bytes, hashed into the manifest
  nlohmann::json root = nlohmann::json::object();
};

/// Reads TOML, or JSON when the extension is .json. Throws ConfigError.
ConfigFile load_config(const std::filesystem::path& path);
/// Same, from text; `json` selects the format.
nlohmann::json parse_config_text(const std::string& text, bool json);

/// Typed view of one table. Every key must be kebab-case and read exactly once;
/// finish() rejects whatever was not consumed.
class Section {
 public:
  Section(const nlohmann::json& node, std::string where);

  bool has(const std::string& key) const;
  Section section(const std::string& key);

  long long get_int(const std::string& key, long long fallback);
  double get_double(const std::string& key, double fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::string get_string(const std::string& key, const std::string& fallback);
  /// Accepts a single string or an array of strings.
  std::vector<std::string> get_strings(const std::string& key, const std::vector<std::string>& fallback);
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback);
  std::optional<double> get_optional_double(const std::string& key);

  void finish() const;

 private:
  const nlohmann::json* lookup(const std::string& key);
  std::string name(const std::string& key) const;

  nlohmann::json node_;
  std::string where_;
  std::set<std::string> used_;
};

}  // namespace mdlb::cli

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mdlb::cli {

/// Writes to a temporary sibling and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Hash git assigns to a blob with these bytes (SHA-1 of "blob <size>\0" + content).
std::string git_blob_hash(const std::string& content);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

/// Collects the files of one run and writes its manifest last.
class OutputDir {
 public:
  OutputDir(std::filesystem::path dir, std::string command);

  const std::filesystem::path& path() const { return dir_; }
  void write(const std::string& name, const std::string& content);

  void set_config(const std::filesystem::path& path, const std::string& text);
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  /// Writes manifest.json; timestamps live only there.
  void finish();

 private:
  std::filesystem::path dir_;
  std::string command_;
  std::string config_path_;
  std::string config_hash_;
  std::uint64_t seed_ = 0;
  std::string started_;
  std::vector<std::string> files_;
};

}  // namespace mdlb::cli

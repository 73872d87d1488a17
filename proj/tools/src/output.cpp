#include "mdlb_cli/output.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace mdlb::cli {

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string git_blob_hash(const std::string& content) {
  const std::string header = "blob " + std::to_string(content.size()) + std::string(1, '\0');
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, header.data(), header.size()) != 1 ||
      EVP_DigestUpdate(ctx, content.data(), content.size()) != 1 || EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("SHA-1 failed");
  }
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char buf[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

OutputDir::OutputDir(std::filesystem::path dir, std::string command)
    : dir_(std::move(dir)), command_(std::move(command)), started_(utc_timestamp()) {
  std::filesystem::create_directories(dir_);
}

void OutputDir::write(const std::string& name, const std::string& content) {
  write_atomic(dir_ / name, content);
  files_.push_back(name);
}

void OutputDir::set_config(const std::filesystem::path& path, const std::string& text) {
  config_path_ = path.string();
  config_hash_ = git_blob_hash(text);
}

void OutputDir::finish() {
  nlohmann::ordered_json j;
  j["command"] = command_;
  j["config_path"] = config_path_.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(config_path_);
  j["config_hash"] = config_hash_.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(config_hash_);
  j["seed"] = seed_;
  j["output_dir"] = dir_.string();
  j["files"] = files_;
  j["started"] = started_;
  j["finished"] = utc_timestamp();
  write_atomic(dir_ / "manifest.json", j.dump(2) + "\n");
}

}  // namespace mdlb::cli

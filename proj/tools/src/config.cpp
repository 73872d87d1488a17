#include "mdlb_cli/config.hpp"

#include <toml.hpp>

#include <fstream>
#include <sstream>

namespace mdlb::cli {
namespace {

bool kebab(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-')) return false;
  }
  return true;
}

}  // namespace

nlohmann::json parse_config_text(const std::string& text, bool json) {
  try {
    if (json) return nlohmann::json::parse(text);
    const auto table = toml::parse(text);
    std::ostringstream out;
    out << toml::json_formatter{table};
    return nlohmann::json::parse(out.str());
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML parse error: " << e.description() << " at line " << e.source().begin.line;
    throw ConfigError(msg.str());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("JSON parse error: ") + e.what());
  }
}

ConfigFile load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  ConfigFile c;
  c.path = path;
  std::ostringstream buf;
  buf << in.rdbuf();
  c.text = buf.str();
  c.root = parse_config_text(c.text, path.extension() == ".json");
  if (!c.root.is_object()) throw ConfigError("config root must be a table");
  return c;
}

Section::Section(const nlohmann::json& node, std::string where) : node_(node), where_(std::move(where)) {
  if (!node_.is_object()) throw ConfigError(where_.empty() ? "config must be a table" : where_ + " must be a table");
  for (const auto& [key, value] : node_.items()) {
    if (!kebab(key)) throw ConfigError("config key '" + name(key) + "' is not kebab-case");
  }
}

std::string Section::name(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }

bool Section::has(const std::string& key) const { return node_.contains(key); }

const nlohmann::json* Section::lookup(const std::string& key) {
  if (!node_.contains(key)) return nullptr;
  used_.insert(key);
  return &node_.at(key);
}

Section Section::section(const std::string& key) {
  const auto* v = lookup(key);
  return Section(v ? *v : nlohmann::json::object(), name(key));
}

long long Section::get_int(const std::string& key, long long fallback) {
  const auto* v = lookup(key);
  if (!v) return fallback;
  if (!v->is_number_integer()) throw ConfigError(name(key) + " must be an integer");
  return v->get<long long>();
}

double Section::get_double(const std::string& key, double fallback) {
  const auto* v = lookup(key);
  if (!v) return fallback;
  if (!v->is_number()) throw ConfigError(name(key) + " must be a number");
  return v->get<double>();
}

std::optional<double> Section::get_optional_double(const std::string& key) {
  if (!has(key)) return std::nullopt;
  return get_double(key, 0.0);
}

bool Section::get_bool(const std::string& key, bool fallback) {
  const auto* v = lookup(key);
  if (!v) return fallback;
  if (!v->is_boolean()) throw ConfigError(name(key) + " must be true or false");
  return v->get<bool>();
}

std::string Section::get_string(const std::string& key, const std::string& fallback) {
  const auto* v = lookup(key);
  if (!v) return fallback;
  if (!v->is_string()) throw ConfigError(name(key) + " must be a string");
  return v->get<std::string>();
}

std::vector<std::string> Section::get_strings(const std::string& key, const std::vector<std::string>& fallback) {
  const auto* v = lookup(key);
  if (!v) return fallback;
  if (v->is_string()) return {v->get<std::string>()};
  if (!v->is_array() || v->empty()) throw ConfigError(name(key) + " must be a string or a non-empty list of strings");
  std::vector<std::string> out;
  for (const auto& e : *v) {
    if (!e.is_string()) throw ConfigError(name(key) + " must contain strings only");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::vector<double> Section::get_doubles(const std::string& key, const std::vector<double>& fallback) {
  const auto* v = lookup(key);
  if (!v) return fallback;
  if (v->is_number()) return {v->get<double>()};
  if (!v->is_array() || v->empty()) throw ConfigError(name(key) + " must be a number or a non-empty list of numbers");
  std::vector<double> out;
  for (const auto& e : *v) {
    if (!e.is_number()) throw ConfigError(name(key) + " must contain numbers only");
    out.push_back(e.get<double>());
  }
  return out;
}

void Section::finish() const {
  for (const auto& [key, value] : node_.items()) {
    if (!used_.count(key)) throw ConfigError("unknown config key '" + name(key) + "'");
  }
}

}  // namespace mdlb::cli

#include "turbcloud/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "turbcloud/errors.hpp"

namespace turbcloud {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

} // namespace

ConfigMap ConfigMap::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str(), "file:" + path);
}

ConfigMap ConfigMap::from_string(const std::string& text,
                                 const std::string& source) {
  ConfigMap cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("malformed config line " + std::to_string(lineno) +
                        " (expected key = value): '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("empty key on config line " + std::to_string(lineno));
    }
    cfg.set(key, value, source);
  }
  return cfg;
}

void ConfigMap::set(const std::string& key, const std::string& value,
                    const std::string& source) {
  entries_[key] = Entry{value, source, false};
}

void ConfigMap::note(const std::string& key, const std::string& value) {
  entries_[key] = Entry{value, "resolved", true};
}

void ConfigMap::overlay(const ConfigMap& higher) {
  for (const auto& [k, e] : higher.entries_) entries_[k] = e;
}

bool ConfigMap::has(const std::string& key) const {
  return entries_.count(key) != 0;
}

double ConfigMap::get_double(const std::string& key) {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw ConfigError("missing required key '" + key + "'");
  }
  it->second.consumed = true;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(it->second.value.c_str(), &end);
  if (end == it->second.value.c_str() || *end != '\0' || errno == ERANGE) {
    throw ConfigError("key '" + key + "': expected a real number, got '" +
                      it->second.value + "'");
  }
  return v;
}

double ConfigMap::get_double(const std::string& key, double def) {
  if (!has(key)) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", def);
    entries_[key] = Entry{buf, "default", true};
    return def;
  }
  return get_double(key);
}

std::int64_t ConfigMap::get_int(const std::string& key) {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw ConfigError("missing required key '" + key + "'");
  }
  it->second.consumed = true;
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(it->second.value.c_str(), &end, 10);
  if (end == it->second.value.c_str() || *end != '\0' || errno == ERANGE) {
    throw ConfigError("key '" + key + "': expected an integer, got '" +
                      it->second.value + "'");
  }
  return v;
}

std::int64_t ConfigMap::get_int(const std::string& key, std::int64_t def) {
  if (!has(key)) {
    entries_[key] = Entry{std::to_string(def), "default", true};
    return def;
  }
  return get_int(key);
}

std::uint64_t ConfigMap::get_u64(const std::string& key, std::uint64_t def) {
  if (!has(key)) {
    entries_[key] = Entry{std::to_string(def), "default", true};
    return def;
  }
  auto it = entries_.find(key);
  it->second.consumed = true;
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(it->second.value.c_str(), &end, 10);
  if (end == it->second.value.c_str() || *end != '\0' || errno == ERANGE) {
    throw ConfigError("key '" + key + "': expected an unsigned integer, got '" +
                      it->second.value + "'");
  }
  return v;
}

bool ConfigMap::get_bool(const std::string& key, bool def) {
  if (!has(key)) {
    entries_[key] = Entry{def ? "true" : "false", "default", true};
    return def;
  }
  auto it = entries_.find(key);
  it->second.consumed = true;
  const std::string& v = it->second.value;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("key '" + key + "': expected a boolean, got '" + v + "'");
}

std::string ConfigMap::get_string(const std::string& key) {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw ConfigError("missing required key '" + key + "'");
  }
  it->second.consumed = true;
  return it->second.value;
}

std::string ConfigMap::get_string(const std::string& key,
                                  const std::string& def) {
  if (!has(key)) {
    entries_[key] = Entry{def, "default", true};
    return def;
  }
  return get_string(key);
}

std::optional<double> ConfigMap::get_optional_double(const std::string& key) {
  if (!has(key)) return std::nullopt;
  return get_double(key);
}

std::vector<std::uint64_t> ConfigMap::get_u64_list(const std::string& key,
                                                   const std::string& def) {
  const std::string raw = get_string(key, def);
  std::vector<std::uint64_t> out;
  std::istringstream in(raw);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0' || errno == ERANGE) {
      throw ConfigError("key '" + key + "': expected a comma-separated list "
                        "of unsigned integers, got '" + raw + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) {
    throw ConfigError("key '" + key + "': empty list");
  }
  return out;
}

void ConfigMap::finalize() const {
  for (const auto& [k, e] : entries_) {
    if (!e.consumed) {
      throw ConfigError("unknown key '" + k + "' (from " + e.source + ")");
    }
  }
}

} // namespace turbcloud

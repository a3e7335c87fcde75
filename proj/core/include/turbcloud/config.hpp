/// @file config.hpp
/// @brief Strict key-value experiment configuration. Values arrive from
///        (in increasing precedence) built-in defaults, a config file,
///        and command-line flags; unknown keys are hard errors and every
///        resolved value is recorded for the run's sidecar metadata.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace turbcloud {

class ConfigMap {
public:
  /// Parses `key = value` lines ('#' comments, blank lines ignored).
  static ConfigMap from_file(const std::string& path);
  static ConfigMap from_string(const std::string& text,
                               const std::string& source = "string");

  /// Inserts or overrides a value (later set wins); `source` is recorded
  /// in the sidecar ("file", "flag", ...).
  void set(const std::string& key, const std::string& value,
           const std::string& source);

  /// Records derived metadata (already consumed) for the sidecar, e.g.
  /// calibrated spectrum constants.
  void note(const std::string& key, const std::string& value);

  /// Merges `higher` over this map (flag-over-file precedence).
  void overlay(const ConfigMap& higher);

  bool has(const std::string& key) const;

  // Typed getters. The no-default forms throw ConfigError when the key
  // is missing; the default forms record the default as the resolved
  // value. Every getter marks its key as consumed; finalize() treats any
  // unconsumed key as an unknown-key error, so typos never pass silently.
  double get_double(const std::string& key);
  double get_double(const std::string& key, double def);
  std::int64_t get_int(const std::string& key);
  std::int64_t get_int(const std::string& key, std::int64_t def);
  std::uint64_t get_u64(const std::string& key, std::uint64_t def);
  bool get_bool(const std::string& key, bool def);
  std::string get_string(const std::string& key);
  std::string get_string(const std::string& key, const std::string& def);
  std::optional<double> get_optional_double(const std::string& key);
  std::vector<std::uint64_t> get_u64_list(const std::string& key,
                                          const std::string& def);

  /// Throws ConfigError naming the first key that was set but never
  /// consumed by the experiment.
  void finalize() const;

  struct Entry {
    std::string value;
    std::string source;
    bool consumed = false;
  };
  const std::map<std::string, Entry>& entries() const { return entries_; }

private:
  std::map<std::string, Entry> entries_;
};

} // namespace turbcloud

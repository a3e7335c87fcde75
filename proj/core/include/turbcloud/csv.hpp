/// @file csv.hpp
/// @brief CSV emission with a fixed column order and 17-significant-digit
///        floats, so identical runs produce byte-identical files, plus
///        the JSON sidecar that records each run's resolved config.
#pragma once

#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "turbcloud/config.hpp"

namespace turbcloud {

std::string format_double(double v); // %.17g

class CsvBuilder {
public:
  explicit CsvBuilder(char sep = ',') : sep_(sep) {}

  void header(std::span<const std::string> columns);
  void row(std::span<const double> values);
  /// Footer row: a label cell followed by numeric cells.
  void footer(const std::string& label, std::span<const double> values);
  void comment(const std::string& text); // '#'-prefixed line

  const std::string& str() const { return out_; }

private:
  std::string out_;
  char sep_;
};

/// Writes `content` to `path` (parent directories must exist).
void write_file(const std::string& path, const std::string& content);

/// Writes `<csv_path>.meta.json` carrying the resolved configuration
/// (value + provenance per key), the artifact version, and the
/// experiment kind.
void write_sidecar(const std::string& csv_path, const std::string& experiment,
                   const ConfigMap& resolved);

} // namespace turbcloud

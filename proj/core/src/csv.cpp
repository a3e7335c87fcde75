#include "turbcloud/csv.hpp"

#include <cstdio>
#include <fstream>

#include "nlohmann/json.hpp"
#include "turbcloud/errors.hpp"
#include "turbcloud/version.hpp"

namespace turbcloud {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void CsvBuilder::header(std::span<const std::string> columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ += sep_;
    out_ += columns[i];
  }
  out_ += '\n';
}

void CsvBuilder::row(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ += sep_;
    out_ += format_double(values[i]);
  }
  out_ += '\n';
}

void CsvBuilder::footer(const std::string& label,
                        std::span<const double> values) {
  out_ += label;
  for (const double v : values) {
    out_ += sep_;
    out_ += format_double(v);
  }
  out_ += '\n';
}

void CsvBuilder::comment(const std::string& text) {
  out_ += "# ";
  out_ += text;
  out_ += '\n';
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open output file '" + path + "'");
  out << content;
  if (!out) throw InvalidInput("failed writing output file '" + path + "'");
}

void write_sidecar(const std::string& csv_path, const std::string& experiment,
                   const ConfigMap& resolved) {
  nlohmann::json j;
  j["artifact"] = "turbcloud";
  j["version"] = kVersion;
  j["experiment"] = experiment;
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& [k, e] : resolved.entries()) {
    cfg[k] = {{"value", e.value}, {"source", e.source}};
  }
  j["config"] = cfg;
  write_file(csv_path + ".meta.json", j.dump(2) + "\n");
}

} // namespace turbcloud

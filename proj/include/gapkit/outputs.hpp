#pragma once

#include <cstdint>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace gapkit {

/// Shortest-exact decimal form of a double; reparses to the same bits.
std::string format_double(double v);

/// FNV-1a 64-bit hash, hex-encoded; used as the resolved-config fingerprint.
std::string fnv1a_hex(const std::string& s);

/// Deterministic CSV writer: a hash comment line, a header, then rows with
/// doubles rendered via format_double.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& header, const std::string& config_hash);
  void row(const std::vector<std::string>& cells);
  static std::string num(double v) { return format_double(v); }
  static std::string num(long v) { return std::to_string(v); }
  static std::string num(int v) { return std::to_string(v); }

 private:
  std::ofstream out_;
};

/// Writes JSON with 2-space indentation and a trailing newline.
void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace gapkit

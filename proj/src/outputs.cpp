#include "gapkit/outputs.hpp"

#include <cstdio>
#include <stdexcept>

namespace gapkit {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& header,
                     const std::string& config_hash)
    : out_(path) {
  if (!out_) throw std::runtime_error("CsvWriter: cannot open '" + path + "'");
  out_ << "# config_hash=" << config_hash << "\n" << header << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << "\n";
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_json: cannot open '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace gapkit

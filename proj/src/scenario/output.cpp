#include <cmath>
#include <cstdio>

#include "qslspin/scenario.hpp"

namespace qslspin::scenario {

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t j = 0; j < t.columns.size(); ++j) {
    if (j) out += ',';
    out += t.columns[j];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      out += format_double(row[j]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json_text(const Table& t) {
  // Written by hand so that every number carries the same 17 digits as the
  // CSV writer.
  std::string out = "{\n  \"columns\": [";
  for (std::size_t j = 0; j < t.columns.size(); ++j) {
    if (j) out += ", ";
    out += nlohmann::json(t.columns[j]).dump();
  }
  out += "],\n  \"rows\": [";
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    out += i ? ",\n    [" : "\n    [";
    const auto& row = t.rows[i];
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ", ";
      out += std::isfinite(row[j]) ? format_double(row[j]) : "null";
    }
    out += ']';
  }
  out += t.rows.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace qslspin::scenario

#pragma once
#ifndef MUDGAIN_REPORT_HPP
#define MUDGAIN_REPORT_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mudgain {

inline constexpr std::string_view kToolVersion = "0.1.0";

namespace text {

inline std::string printf_string(const char* format, double value) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, format, value);
  return std::string(buf, static_cast<std::size_t>(n));
}

/// Probabilities: 6 significant digits, trailing zeros kept.
inline std::string prob(double p) { return printf_string("%#.6g", p); }

/// Decibel values: 4 decimal places.
inline std::string db(double x) { return printf_string("%.4f", x); }

inline std::string real(double x) { return printf_string("%g", x); }

/// Round-trippable representation for manifests.
inline std::string exact(double x) { return printf_string("%.17g", x); }

template <typename T, typename F>
std::string join(const std::vector<T>& values, F&& format, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += format(values[i]);
  }
  return out;
}

}  // namespace text

/// Minimal CSV builder: comma separated, LF line endings, no quoting (all
/// fields are numeric or fixed tokens).
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : columns_{header.size()} {
    add_row(std::move(header));
  }

  void add_row(std::vector<std::string> fields) {
    if (fields.size() != columns_) throw std::logic_error("CsvTable: column count mismatch");
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) text_ += ',';
      text_ += fields[i];
    }
    text_ += '\n';
  }

  const std::string& str() const { return text_; }

 private:
  std::size_t columns_;
  std::string text_;
};

/**
 * Sidecar describing how an output file was produced: one `key=value` per
 * line, keys in a fixed order. Replaying it regenerates the output
 * byte-for-byte.
 */
struct RunManifest {
  std::vector<std::pair<std::string, std::string>> entries;

  void set(std::string key, std::string value) {
    for (auto& [k, v] : entries) {
      if (k == key) {
        v = std::move(value);
        return;
      }
    }
    entries.emplace_back(std::move(key), std::move(value));
  }

  const std::string* find(std::string_view key) const {
    for (const auto& [k, v] : entries) {
      if (k == key) return &v;
    }
    return nullptr;
  }

  const std::string& at(std::string_view key) const {
    if (const auto* v = find(key)) return *v;
    throw std::runtime_error("manifest is missing key '" + std::string(key) + "'");
  }

  std::string str() const {
    std::string out;
    for (const auto& [k, v] : entries) out += k + "=" + v + "\n";
    return out;
  }

  static RunManifest parse(std::string_view text) {
    RunManifest m;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line.front() == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw std::runtime_error("malformed manifest line: " + line);
      m.set(line.substr(0, eq), line.substr(eq + 1));
    }
    return m;
  }
};

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace mudgain

#endif  // MUDGAIN_REPORT_HPP

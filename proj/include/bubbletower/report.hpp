#ifndef BUBBLETOWER_REPORT_HPP
#define BUBBLETOWER_REPORT_HPP

#include <string>
#include <vector>

#include "bubbletower/config.hpp"

namespace bubbletower {

inline constexpr const char* kVersion = "0.1.0";

/// Deterministic structured-text result document. Identical config + seed +
/// version produce byte-identical reports.
class Report {
 public:
  Report(const std::string& command, const AnalysisConfig& config);

  void section(const std::string& name);
  void kv(const std::string& key, const std::string& value);
  void kv(const std::string& key, const char* value);
  void kv(const std::string& key, double value);
  void kv(const std::string& key, long long value);
  void kv(const std::string& key, int value);
  void kv(const std::string& key, bool value);
  void line(const std::string& text);

  void set_status(bool pass);
  bool status() const { return pass_; }

  std::string text() const;
  void write_atomic(const std::string& path) const;

 private:
  std::vector<std::string> lines_;
  bool pass_ = true;
};

std::string format_double(double value);  // fixed %.12g rendering

/// RFC 4180 CSV writer: CRLF rows, quoting for separators/quotes/newlines.
class CsvWriter {
 public:
  void row(const std::vector<std::string>& fields);
  std::string text() const { return body_; }
  void write_atomic(const std::string& path) const;

 private:
  std::string body_;
};

void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace bubbletower

#endif

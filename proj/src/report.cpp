#include "bubbletower/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace bubbletower {

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

Report::Report(const std::string& command, const AnalysisConfig& config) {
  lines_.push_back("bubbletower report");
  lines_.push_back("version: " + std::string(kVersion));
  lines_.push_back("command: " + command);
  lines_.push_back("config_hash: " + config.config_hash);
  lines_.push_back("seed: " + std::to_string(config.seed));
}

void Report::section(const std::string& name) {
  lines_.push_back("");
  lines_.push_back("[" + name + "]");
}

void Report::kv(const std::string& key, const std::string& value) {
  lines_.push_back(key + ": " + value);
}
void Report::kv(const std::string& key, const char* value) { kv(key, std::string(value)); }
void Report::kv(const std::string& key, double value) { kv(key, format_double(value)); }
void Report::kv(const std::string& key, long long value) { kv(key, std::to_string(value)); }
void Report::kv(const std::string& key, int value) { kv(key, std::to_string(value)); }
void Report::kv(const std::string& key, bool value) { kv(key, value ? "pass" : "fail"); }

void Report::line(const std::string& text) { lines_.push_back(text); }

void Report::set_status(bool pass) { pass_ = pass; }

std::string Report::text() const {
  std::string out;
  for (const std::string& line : lines_) {
    out += line;
    out += '\n';
  }
  out += "\nstatus: ";
  out += pass_ ? "pass" : "fail";
  out += '\n';
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write: " + tmp);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

void Report::write_atomic(const std::string& path) const { write_file_atomic(path, text()); }

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) body_ += ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\r\n") != std::string::npos) {
      body_ += '"';
      for (char c : f) {
        if (c == '"') body_ += '"';
        body_ += c;
      }
      body_ += '"';
    } else {
      body_ += f;
    }
  }
  body_ += "\r\n";
}

void CsvWriter::write_atomic(const std::string& path) const { write_file_atomic(path, body_); }

}  // namespace bubbletower

#include "bubbletower/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace bubbletower {

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string AnalysisConfig::base_dir() const {
  return std::filesystem::path(source_path).parent_path().string();
}

std::string AnalysisConfig::resolve(const std::string& path) const {
  if (path.empty() || std::filesystem::path(path).is_absolute()) return path;
  const std::string base = base_dir();
  return base.empty() ? path : base + "/" + path;
}

namespace {

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> number_list(const std::string& value) {
  std::vector<double> out;
  std::istringstream in(value);
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

}  // namespace

AnalysisConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream raw;
  raw << in.rdbuf();

  AnalysisConfig cfg;
  cfg.source_path = path;
  cfg.config_hash = fnv1a_hex(raw.str());

  std::istringstream body(raw.str());
  std::string line, section;
  int lineno = 0;
  auto fail = [&](const std::string& message) {
    throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + message);
  };

  while (std::getline(body, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trimmed(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = trimmed(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trimmed(line.substr(0, eq));
    const std::string value = trimmed(line.substr(eq + 1));

    try {
      if (section == "candidate") {
        if (key == "file")
          cfg.candidate_file = value;
        else if (key == "expression")
          cfg.expression = value;
        else if (key == "dimension")
          cfg.dimension = std::stoi(value);
        else
          fail("unknown key '" + key + "' in [candidate]");
      } else if (section == "quadrature") {
        if (key == "level")
          cfg.quad_level = std::stoi(value);
        else
          fail("unknown key '" + key + "' in [quadrature]");
      } else if (section == "critical") {
        if (key == "grid_resolution")
          cfg.grid_resolution = std::stoi(value);
        else
          fail("unknown key '" + key + "' in [critical]");
      } else if (section == "spread") {
        if (key == "file")
          cfg.spread_file = value;
        else if (key == "kappa_lo")
          cfg.kappa_lo = std::stod(value);
        else if (key == "kappa_hi")
          cfg.kappa_hi = std::stod(value);
        else if (key == "kappa_prev")
          cfg.kappa_prev = std::stod(value);
        else if (key == "kappa_cur")
          cfg.kappa_cur = std::stod(value);
        else if (key == "comparison_lo")
          cfg.comparison_lo = std::stoi(value);
        else if (key == "comparison_hi")
          cfg.comparison_hi = std::stoi(value);
        else if (key == "L")
          cfg.sigma_L = std::stod(value);
        else
          fail("unknown key '" + key + "' in [spread]");
      } else if (section == "homology") {
        if (key == "complex")
          cfg.chain_file = value;
        else if (key == "scenario")
          cfg.scenario_file = value;
        else
          fail("unknown key '" + key + "' in [homology]");
      } else if (section == "flow") {
        if (key == "c1")
          cfg.flow.c1 = std::stod(value);
        else if (key == "c2")
          cfg.flow.c2 = std::stod(value);
        else if (key == "c3")
          cfg.flow.c3 = std::stod(value);
        else if (key == "b")
          cfg.flow.b = std::stod(value);
        else if (key == "coupling")
          cfg.flow.coupling = std::stod(value);
        else if (key == "horizon")
          cfg.flow_horizon = std::stod(value);
        else if (key == "tolerance")
          cfg.flow_tolerance = std::stod(value);
        else if (key == "output_dt")
          cfg.flow_output_dt = std::stod(value);
        else if (key == "lambda0")
          cfg.flow_lambda0 = std::stod(value);
        else if (key == "lambda_cap")
          cfg.flow_lambda_cap = std::stod(value);
        else if (key == "start")
          cfg.flow_start = value;
        else if (key == "offset")
          cfg.flow_offset = std::stod(value);
        else
          fail("unknown key '" + key + "' in [flow]");
      } else if (section == "bubble") {
        if (key == "lambdas")
          cfg.lambda_list = number_list(value);
        else if (key == "center")
          cfg.bubble_center = value;
        else
          fail("unknown key '" + key + "' in [bubble]");
      } else if (section == "output") {
        if (key == "dir")
          cfg.out_dir = value;
        else if (key == "cache_dir")
          cfg.cache_dir = value;
        else if (key == "seed")
          cfg.seed = std::stoull(value);
        else
          fail("unknown key '" + key + "' in [output]");
      } else if (section.empty()) {
        fail("key '" + key + "' outside of any section");
      } else {
        fail("unknown section [" + section + "]");
      }
    } catch (const std::invalid_argument&) {
      fail("malformed value for '" + key + "'");
    } catch (const std::out_of_range&) {
      fail("value out of range for '" + key + "'");
    }
  }
  return cfg;
}

}  // namespace bubbletower

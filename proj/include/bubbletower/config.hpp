#ifndef BUBBLETOWER_CONFIG_HPP
#define BUBBLETOWER_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bubbletower/shadow.hpp"

namespace bubbletower {

/// One analysis run: a sectioned key-value file plus CLI overrides.
struct AnalysisConfig {
  // [candidate]
  std::string candidate_file;
  std::string expression;
  int dimension = 0;

  // [quadrature]
  int quad_level = 4;

  // [critical]
  int grid_resolution = 0;  // 0 picks the per-dimension default

  // [spread]
  std::string spread_file;
  double kappa_lo = 0.95;
  double kappa_hi = 1.05;
  double kappa_prev = 0.95;
  double kappa_cur = 1.05;
  int comparison_lo = -1;
  int comparison_hi = -1;
  double sigma_L = 0.0;

  // [homology]
  std::string chain_file;
  std::string scenario_file;

  // [flow]
  FlowConstants flow;
  double flow_horizon = 50.0;
  double flow_tolerance = 1e-9;
  double flow_output_dt = 0.5;
  double flow_lambda0 = 10.0;
  double flow_lambda_cap = 1e6;
  std::string flow_start = "near-index-2";  // or explicit coordinates
  double flow_offset = 1e-3;

  // [bubble]
  std::vector<double> lambda_list = {8.0, 16.0, 32.0, 64.0};
  std::string bubble_center = "max";  // max | min | coordinates

  // [output]
  std::string out_dir = "out";
  std::string cache_dir = ".bubbletower-cache/v1";
  std::uint64_t seed = 0;
  bool no_cache = false;

  // provenance
  std::string source_path;
  std::string config_hash;

  /// Directory of the config file, used to resolve relative data paths.
  std::string base_dir() const;
  std::string resolve(const std::string& path) const;
};

AnalysisConfig load_config(const std::string& path);

/// FNV-1a/64 of a byte string, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace bubbletower

#endif

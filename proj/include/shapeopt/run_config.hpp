#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shapeopt/flow.hpp"
#include "shapeopt/optimizer.hpp"

namespace shapeopt {

/// Flat INI-style run configuration (sections of key=value lines, '#'
/// comments). Unknown sections or keys are rejected.
struct RunConfig {
  // [mesh]
  std::size_t n = 256;
  std::size_t n_rings = 64;
  double r_far = 18.0;
  double stretch = 1.12;
  double radius = 1.0;  // initial circle radius

  // [flow]
  double mu = 0.798e-3;
  double u_inf = 1e-5;
  double rho = 998.2;
  double phi = 0.0;
  double tol = 1e-8;

  // [symbol]
  std::vector<double> omegas = {20.0, 60.0};
  int num_stations = 16;
  double fd_eps = 1e-5;  // relative to obstacle radius

  // [optimizer]
  std::string method = "local";  // steepest | global | local | compare
  double gamma = 1.0;
  int max_iters = 20;
  double eta = 0.2;
  double eps_d = 1e-3;
  double window_width = 1.0 / 16.0;
  std::string beta1_mode = "analytic";  // analytic | fallback
  double fallback_c = 10.0;
  double volume_tol = 1e-8;
  int snapshot_every = 1;

  // [output]
  std::string out_dir = "out";
  std::uint64_t seed = 0;

  FlowConfig flow_config() const;
  OptimizationConfig opt_config() const;  // method "compare" maps to local
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

/// FNV-1a hash of the serialized config, for CSV provenance comments.
std::uint64_t config_hash(const RunConfig& cfg);

}  // namespace shapeopt

#include "shapeopt/run_config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "shapeopt/errors.hpp"

namespace shapeopt {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) fail(line, "trailing characters in number '" + v + "'");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    fail(line, "expected a number, got '" + v + "'");
  }
}

long to_long(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) fail(line, "trailing characters in integer '" + v + "'");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    fail(line, "expected an integer, got '" + v + "'");
  }
}

std::vector<double> to_list(const std::string& v, int line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(item, line));
  }
  if (out.empty()) fail(line, "expected a comma-separated list");
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    const auto hash = s.find('#');
    if (hash != std::string::npos) s = trim(s.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "mesh" && section != "flow" && section != "symbol" &&
          section != "optimizer" && section != "output")
        fail(line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key=value");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (section.empty()) fail(line, "key '" + key + "' outside any section");

    if (section == "mesh") {
      if (key == "n") cfg.n = static_cast<std::size_t>(to_long(val, line));
      else if (key == "n_rings") cfg.n_rings = static_cast<std::size_t>(to_long(val, line));
      else if (key == "r_far") cfg.r_far = to_double(val, line);
      else if (key == "stretch") cfg.stretch = to_double(val, line);
      else if (key == "radius") cfg.radius = to_double(val, line);
      else fail(line, "unknown key '" + key + "' in [mesh]");
    } else if (section == "flow") {
      if (key == "mu") cfg.mu = to_double(val, line);
      else if (key == "u_inf") cfg.u_inf = to_double(val, line);
      else if (key == "rho") cfg.rho = to_double(val, line);
      else if (key == "phi") cfg.phi = to_double(val, line);
      else if (key == "tol") cfg.tol = to_double(val, line);
      else fail(line, "unknown key '" + key + "' in [flow]");
    } else if (section == "symbol") {
      if (key == "omegas") cfg.omegas = to_list(val, line);
      else if (key == "num_stations") cfg.num_stations = static_cast<int>(to_long(val, line));
      else if (key == "fd_eps") cfg.fd_eps = to_double(val, line);
      else fail(line, "unknown key '" + key + "' in [symbol]");
    } else if (section == "optimizer") {
      if (key == "method") cfg.method = val;
      else if (key == "gamma") cfg.gamma = to_double(val, line);
      else if (key == "max_iters") cfg.max_iters = static_cast<int>(to_long(val, line));
      else if (key == "eta") cfg.eta = to_double(val, line);
      else if (key == "eps_d") cfg.eps_d = to_double(val, line);
      else if (key == "window_width") cfg.window_width = to_double(val, line);
      else if (key == "beta1_mode") cfg.beta1_mode = val;
      else if (key == "fallback_c") cfg.fallback_c = to_double(val, line);
      else if (key == "volume_tol") cfg.volume_tol = to_double(val, line);
      else if (key == "snapshot_every") cfg.snapshot_every = static_cast<int>(to_long(val, line));
      else fail(line, "unknown key '" + key + "' in [optimizer]");
    } else {  // output
      if (key == "dir") cfg.out_dir = val;
      else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_long(val, line));
      else fail(line, "unknown key '" + key + "' in [output]");
    }
  }

  // validation
  if (cfg.n < 8) throw ConfigError("mesh.n must be >= 8");
  if (cfg.n_rings < 8) throw ConfigError("mesh.n_rings must be >= 8");
  if (!(cfg.r_far > 0.0)) throw ConfigError("mesh.r_far must be positive");
  if (!(cfg.stretch >= 1.0)) throw ConfigError("mesh.stretch must be >= 1");
  if (!(cfg.radius > 0.0)) throw ConfigError("mesh.radius must be positive");
  if (!(cfg.mu > 0.0)) throw ConfigError("flow.mu must be positive");
  if (!(cfg.rho > 0.0)) throw ConfigError("flow.rho must be positive");
  if (!(cfg.tol > 0.0)) throw ConfigError("flow.tol must be positive");
  if (cfg.method != "steepest" && cfg.method != "global" && cfg.method != "local" &&
      cfg.method != "compare")
    throw ConfigError("optimizer.method must be steepest|global|local|compare");
  if (cfg.beta1_mode != "analytic" && cfg.beta1_mode != "fallback")
    throw ConfigError("optimizer.beta1_mode must be analytic|fallback");
  if (!(cfg.gamma > 0.0)) throw ConfigError("optimizer.gamma must be positive");
  if (cfg.max_iters < 0) throw ConfigError("optimizer.max_iters must be >= 0");
  if (!(cfg.eta > 0.0)) throw ConfigError("optimizer.eta must be positive");
  if (!(cfg.eps_d > 0.0)) throw ConfigError("optimizer.eps_d must be positive");
  if (!(cfg.window_width > 0.0))
    throw ConfigError("optimizer.window_width must be positive");
  if (!(cfg.volume_tol > 0.0)) throw ConfigError("optimizer.volume_tol must be positive");
  if (cfg.num_stations < 0) throw ConfigError("symbol.num_stations must be >= 0");
  if (!(cfg.fd_eps > 0.0)) throw ConfigError("symbol.fd_eps must be positive");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream o;
  o << "[mesh]\n"
    << "n = " << c.n << "\n"
    << "n_rings = " << c.n_rings << "\n"
    << "r_far = " << fmt(c.r_far) << "\n"
    << "stretch = " << fmt(c.stretch) << "\n"
    << "radius = " << fmt(c.radius) << "\n"
    << "[flow]\n"
    << "mu = " << fmt(c.mu) << "\n"
    << "u_inf = " << fmt(c.u_inf) << "\n"
    << "rho = " << fmt(c.rho) << "\n"
    << "phi = " << fmt(c.phi) << "\n"
    << "tol = " << fmt(c.tol) << "\n"
    << "[symbol]\n"
    << "omegas = ";
  for (std::size_t i = 0; i < c.omegas.size(); ++i)
    o << (i ? "," : "") << fmt(c.omegas[i]);
  o << "\n"
    << "num_stations = " << c.num_stations << "\n"
    << "fd_eps = " << fmt(c.fd_eps) << "\n"
    << "[optimizer]\n"
    << "method = " << c.method << "\n"
    << "gamma = " << fmt(c.gamma) << "\n"
    << "max_iters = " << c.max_iters << "\n"
    << "eta = " << fmt(c.eta) << "\n"
    << "eps_d = " << fmt(c.eps_d) << "\n"
    << "window_width = " << fmt(c.window_width) << "\n"
    << "beta1_mode = " << c.beta1_mode << "\n"
    << "fallback_c = " << fmt(c.fallback_c) << "\n"
    << "volume_tol = " << fmt(c.volume_tol) << "\n"
    << "snapshot_every = " << c.snapshot_every << "\n"
    << "[output]\n"
    << "dir = " << c.out_dir << "\n"
    << "seed = " << c.seed << "\n";
  return o.str();
}

std::uint64_t config_hash(const RunConfig& cfg) {
  const std::string s = serialize_config(cfg);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

FlowConfig RunConfig::flow_config() const {
  FlowConfig f;
  f.mu = mu;
  f.u_inf = {u_inf, 0.0};
  f.rho = rho;
  f.phi = phi;
  f.tol = tol;
  return f;
}

OptimizationConfig RunConfig::opt_config() const {
  OptimizationConfig o;
  if (method == "steepest") o.method = Method::steepest;
  else if (method == "global") o.method = Method::global;
  else o.method = Method::local;
  o.gamma = gamma;
  o.max_iters = max_iters;
  o.eta = eta;
  o.eps_d = eps_d;
  o.window_width = window_width;
  o.beta1_fallback = (beta1_mode == "fallback");
  o.fallback_c = fallback_c;
  o.volume_tol = volume_tol;
  o.n_rings = n_rings;
  o.r_far = r_far;
  o.stretch = stretch;
  o.snapshot_every = snapshot_every;
  return o;
}

}  // namespace shapeopt

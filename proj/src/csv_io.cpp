#include "shapeopt/csv_io.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace shapeopt {

namespace {

struct Csv {
  std::FILE* f;
  explicit Csv(const std::string& path, const std::string& header,
               std::uint64_t hash) {
    f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    std::fprintf(f, "# config %016llx\n", static_cast<unsigned long long>(hash));
    std::fprintf(f, "%s\n", header.c_str());
  }
  ~Csv() { std::fclose(f); }
  void num(double v, bool last = false) {
    std::fprintf(f, "%.17g%c", v, last ? '\n' : ',');
  }
  void text(const std::string& s, bool last = false) {
    std::fprintf(f, "%s%c", s.c_str(), last ? '\n' : ',');
  }
};

std::size_t nearest_node(const SurfaceCurve& s, double xi1) {
  std::size_t best = 0;
  double d = 1e300;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double e = std::abs(s.xi1[j] - xi1);
    if (e < d) {
      d = e;
      best = j;
    }
  }
  return best;
}

}  // namespace

void write_history_csv(const std::string& path, const OptimizationHistory& hist,
                       std::uint64_t cfg_hash) {
  Csv c(path, "iter,drag,volume,grad_inf_norm,step_inf_norm,method", cfg_hash);
  for (const auto& r : hist.records) {
    c.num(r.iter);
    c.num(r.drag);
    c.num(r.volume);
    c.num(r.grad_inf_norm);
    c.num(r.step_inf_norm);
    c.text(r.method, true);
  }
}

void write_surface_csv(const std::string& path, const SurfaceCurve& surface,
                       std::uint64_t cfg_hash) {
  Csv c(path, "x,y", cfg_hash);
  for (const Vec2& p : surface.nodes) {
    c.num(p.x);
    c.num(p.y, true);
  }
}

void write_field_csv(const std::string& path, const SurfaceCurve& surface,
                     const SurfaceField& field, const std::string& name,
                     std::uint64_t cfg_hash) {
  Csv c(path, "node,xi1,x,y," + name, cfg_hash);
  for (std::size_t j = 0; j < surface.size(); ++j) {
    c.num(static_cast<double>(j));
    c.num(surface.xi1[j]);
    c.num(surface.nodes[j].x);
    c.num(surface.nodes[j].y);
    c.num(field[j], true);
  }
}

void write_flow_csv(const std::string& path, const OGridMesh& mesh,
                    const FlowState& flow, std::uint64_t cfg_hash) {
  Csv c(path, "node,x,y,vx,vy,p", cfg_hash);
  for (std::size_t i = 0; i < mesh.n_nodes(); ++i) {
    c.num(static_cast<double>(i));
    c.num(mesh.nodes[i].x);
    c.num(mesh.nodes[i].y);
    c.num(flow.v[i].x);
    c.num(flow.v[i].y);
    c.num(flow.p[i], true);
  }
}

void write_symbol_report_csv(const std::string& path, const SymbolReport& report,
                             const SurfaceCurve& surface, std::uint64_t cfg_hash) {
  Csv c(path, "xi1,beta1_analytic,beta2_analytic,beta1_fd,beta2_fd,r_squared",
        cfg_hash);
  for (const auto& s : report.stations) {
    const std::size_t j = nearest_node(surface, s.xi1_star);
    c.num(s.xi1_star);
    c.num(report.analytic.beta1.size() ? report.analytic.beta1[j] : 0.0);
    c.num(report.analytic.beta2.size() ? report.analytic.beta2[j] : 0.0);
    c.num(s.beta1_fd);
    c.num(s.beta2_fd);
    c.num(s.r_squared, true);
  }
}

void write_probe_csv(const std::string& path, const SurfaceCurve& surface,
                     const ProbeResult& probe, std::uint64_t cfg_hash) {
  Csv c(path, "node,xi1,alpha,h_fd", cfg_hash);
  for (std::size_t j = 0; j < surface.size(); ++j) {
    c.num(static_cast<double>(j));
    c.num(surface.xi1[j]);
    c.num(probe.alpha[j]);
    c.num(probe.ok ? probe.response[j] : 0.0, true);
  }
}

}  // namespace shapeopt

#pragma once

#include <cstdint>
#include <string>

#include "shapeopt/flow.hpp"
#include "shapeopt/geometry.hpp"
#include "shapeopt/optimizer.hpp"
#include "shapeopt/symbol_lab.hpp"

namespace shapeopt {

/// All writers emit a header row preceded by a '# config <hash>' comment.

void write_history_csv(const std::string& path, const OptimizationHistory& hist,
                       std::uint64_t cfg_hash);

void write_surface_csv(const std::string& path, const SurfaceCurve& surface,
                       std::uint64_t cfg_hash);

/// (node, xi1, x, y, value)
void write_field_csv(const std::string& path, const SurfaceCurve& surface,
                     const SurfaceField& field, const std::string& name,
                     std::uint64_t cfg_hash);

/// (node, x, y, vx, vy, p)
void write_flow_csv(const std::string& path, const OGridMesh& mesh,
                    const FlowState& flow, std::uint64_t cfg_hash);

/// (xi1, beta1_analytic, beta2_analytic, beta1_fd, beta2_fd, r_squared)
void write_symbol_report_csv(const std::string& path, const SymbolReport& report,
                             const SurfaceCurve& surface, std::uint64_t cfg_hash);

/// per-probe dump: (node, xi1, alpha, h_fd)
void write_probe_csv(const std::string& path, const SurfaceCurve& surface,
                     const ProbeResult& probe, std::uint64_t cfg_hash);

}  // namespace shapeopt

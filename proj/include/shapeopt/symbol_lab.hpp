#pragma once

#include <string>
#include <utility>
#include <vector>

#include "shapeopt/cost_gradient.hpp"
#include "shapeopt/flow.hpp"
#include "shapeopt/geometry.hpp"
#include "shapeopt/surface_field.hpp"

namespace shapeopt {

/// Coefficients of the Hessian symbol sigma_H = beta1 + beta2 * omega.
struct SymbolCoefficients {
  SurfaceField beta1;
  SurfaceField beta2;
};

/// One finite-difference Hessian probe.
struct ProbeResult {
  double omega = 0.0;
  double shift = 0.0;
  double eps_used = 0.0;
  SurfaceField alpha;
  SurfaceField response;  // H^FD[alpha]
  long phase_lag = 0;     // circular cross-correlation peak, in nodes
  bool ok = false;
  std::string error;
};

struct StationFit {
  double xi1_star = 0.0;
  double beta1_fd = 0.0;  // intercept of the amplitude-vs-omega fit
  double beta2_fd = 0.0;  // slope
  double r_squared = 0.0;
};

struct SymbolReport {
  std::vector<double> omegas;
  std::vector<StationFit> stations;
  std::vector<ProbeResult> probes;  // station-major, then frequency order
  SymbolCoefficients analytic;
};

/// Analytic symbol coefficients from converged primal and adjoint fields,
/// beta2 = 2 df pointwise and beta1 from the product rule applied to the
/// wall-normal derivative of the df integrand (order-1 and order-2 stencils).
SymbolCoefficients analytic_betas(const OGridMesh& mesh, const FlowState& flow,
                                  const AdjointState& adj, const FlowConfig& cfg);

/// H^FD[alpha] = (df(surface + eps alpha n) - df(surface)) / eps. The base
/// gradient is passed in so sweeps reuse one base evaluation. On mesh
/// tangling the step is halved, up to four retries.
SurfaceField fd_hessian_response(const OGridMesh& base, const FlowConfig& cfg,
                                 const SurfaceField& base_df, double base_drag,
                                 const SurfaceField& alpha, double eps,
                                 double* eps_used = nullptr);

/// Least-squares line amplitude(omega) = beta1_fd + beta2_fd * omega through
/// the responses read off at the node nearest xi1_star. Probes must have been
/// shift-aligned so alpha(xi1_star) = 1.
StationFit fit_scaling(const std::vector<std::pair<double, SurfaceField>>& responses,
                       const SurfaceCurve& surface, double xi1_star);

/// Circular cross-correlation peak lag (in nodes) between a and b, reported
/// in (-N/2, N/2].
long circular_phase_lag(const SurfaceField& a, const SurfaceField& b);

/// Full FD verification sweep over probe frequencies and xi1 stations.
SymbolReport beta_sweep(const OGridMesh& base, const FlowConfig& cfg,
                        const std::vector<double>& omega_list,
                        const std::vector<double>& xi1_list, double eps);

}  // namespace shapeopt

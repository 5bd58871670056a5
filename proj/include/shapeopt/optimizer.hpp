#pragma once

#include <string>
#include <vector>

#include "shapeopt/cost_gradient.hpp"
#include "shapeopt/flow.hpp"
#include "shapeopt/geometry.hpp"
#include "shapeopt/smoothing.hpp"
#include "shapeopt/surface_field.hpp"
#include "shapeopt/symbol_lab.hpp"

namespace shapeopt {

enum class Method { steepest, global, local };

struct OptimizationConfig {
  Method method = Method::local;
  double gamma = 1.0;          // step length
  int max_iters = 20;
  double eta = 0.2;            // regularization floor (local)
  double eps_d = 1e-3;         // global Sobolev smoothing parameter
  double window_width = 1.0 / 16.0;
  bool beta1_fallback = false; // replace analytic beta1 by c * smoothed beta2
  double fallback_c = 10.0;
  double fallback_eps_d = 1e-4;
  double volume_tol = 1e-8;    // relative
  double grad_tol = 1e-10;     // infinity-norm stopping floor

  // mesh regeneration settings
  std::size_t n_rings = 64;
  double r_far = 18.0;
  double stretch = 1.12;

  int snapshot_every = 1;      // design snapshot interval, 0 disables
};

struct IterationRecord {
  int iter = 0;
  double drag = 0.0;
  double volume = 0.0;
  double grad_inf_norm = 0.0;
  double step_inf_norm = 0.0;
  std::string method;
};

struct OptimizationHistory {
  std::vector<IterationRecord> records;
  std::vector<SurfaceCurve> designs;      // per snapshot interval
  std::vector<SurfaceField> epsilons;     // per iteration, local method only
  bool halted_on_failure = false;
  std::string failure_reason;
  SurfaceCurve final_surface;
};

/// Raw search direction before quadrature folding and volume projection:
/// -df (steepest), the constant-coefficient Sobolev solve (global), or the
/// full local pipeline modify_beta1 -> windowed_dft -> optimize_epsilon ->
/// assemble -> apply (local). eps_out receives the selected per-node
/// epsilon field for the local method.
SurfaceField search_direction(Method method, const SurfaceField& df,
                              const SymbolCoefficients& symbols,
                              const OptimizationConfig& cfg,
                              SurfaceField* eps_out = nullptr);

/// Removes the quadrature-weighted mean so the first-order volume change of
/// a normal update along p vanishes.
SurfaceField volume_project(const SurfaceField& p, const SurfaceCurve& surface);

/// Uniform normal offset c = (V0 - V)/L applied by Newton iteration (at most
/// 5 steps) until |V - V0|/V0 <= tol.
SurfaceCurve volume_restore(const SurfaceCurve& surface, double v0, double tol = 1e-8);

/// gamma_global = gamma_local * ||p_local||_inf / ||p_global||_inf.
double match_first_step(const SurfaceField& p_local, const SurfaceField& p_global,
                        double gamma_local);

OptimizationHistory run(const SurfaceCurve& initial, const FlowConfig& flow_cfg,
                        const OptimizationConfig& opt_cfg);

}  // namespace shapeopt

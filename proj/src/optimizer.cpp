#include "shapeopt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "shapeopt/errors.hpp"

namespace shapeopt {

namespace {

double inf_norm(const SurfaceField& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::steepest: return "steepest";
    case Method::global: return "global";
    default: return "local";
  }
}

}  // namespace

SurfaceField search_direction(Method method, const SurfaceField& df,
                              const SymbolCoefficients& symbols,
                              const OptimizationConfig& cfg, SurfaceField* eps_out) {
  const std::size_t n = df.size();
  const double L = std::accumulate(df.seg_len.begin(), df.seg_len.end(), 0.0);
  const double dxi = L / static_cast<double>(n);

  if (method == Method::steepest) {
    SurfaceField p = df;
    for (double& v : p.values) v = -v;
    return p;
  }
  if (method == Method::global) return sobolev_smooth(df, cfg.eps_d, dxi);

  // local approximate-Newton pipeline
  SurfaceField beta1 = symbols.beta1;
  if (cfg.beta1_fallback) {
    // c * (lightly Sobolev-smoothed beta2); flip the solver's built-in minus
    beta1 = sobolev_smooth(symbols.beta2, cfg.fallback_eps_d, dxi);
    for (double& v : beta1.values) v *= -cfg.fallback_c;
  }
  const SurfaceField beta1_bar = modify_beta1(beta1, cfg.eta);
  const WindowedSpectrum spectrum = windowed_dft(df, cfg.window_width);
  SurfaceField beta2_abs = symbols.beta2;
  for (double& v : beta2_abs.values) v = std::abs(v);
  const SurfaceField eps = optimize_epsilon(beta1_bar, beta2_abs, spectrum);
  if (eps_out) *eps_out = eps;
  PreconditionerSpec spec = assemble_preconditioner(beta1_bar, eps, dxi, cfg.eta);
  spec.beta2_abs = beta2_abs.values;
  return apply_preconditioner(spec, df);
}

SurfaceField volume_project(const SurfaceField& p, const SurfaceCurve& surface) {
  const std::vector<double> w = trapezoid_weights(surface.seg_len);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    num += p[j] * w[j];
    den += w[j];
  }
  SurfaceField out = p;
  const double mean = num / den;
  for (double& v : out.values) v -= mean;
  return out;
}

SurfaceCurve volume_restore(const SurfaceCurve& surface, double v0, double tol) {
  SurfaceCurve cur = surface;
  for (int it = 0; it < 5; ++it) {
    const double v = obstacle_volume(cur);
    if (std::abs(v - v0) / v0 <= tol) return cur;
    const double c = (v0 - v) / cur.perimeter;
    SurfaceField ones(cur.size(), 1.0);
    cur = perturb_surface(cur, ones, c);
  }
  if (std::abs(obstacle_volume(cur) - v0) / v0 <= tol) return cur;
  throw MeshError("volume_restore: offset iteration did not converge");
}

double match_first_step(const SurfaceField& p_local, const SurfaceField& p_global,
                        double gamma_local) {
  const double nl = inf_norm(p_local);
  const double ng = inf_norm(p_global);
  if (nl == 0.0 || ng == 0.0)
    throw std::invalid_argument("match_first_step: zero direction");
  return gamma_local * nl / ng;
}

OptimizationHistory run(const SurfaceCurve& initial, const FlowConfig& flow_cfg,
                        const OptimizationConfig& opt_cfg) {
  if (!(opt_cfg.gamma > 0.0)) throw std::invalid_argument("run: gamma must be > 0");
  if (opt_cfg.method == Method::local && !(opt_cfg.eta > 0.0))
    throw std::invalid_argument("run: eta must be > 0 for the local method");
  if (opt_cfg.method == Method::global && !(opt_cfg.eps_d > 0.0))
    throw std::invalid_argument("run: eps_d must be > 0 for the global method");

  OptimizationHistory hist;
  SurfaceCurve surface = reparametrize_uniform(initial);
  const double v0 = obstacle_volume(surface);
  int rising = 0;
  double prev_drag = 0.0;

  for (int iter = 0; iter <= opt_cfg.max_iters; ++iter) {
    OGridMesh mesh;
    GradientEval g;
    try {
      mesh = build_ogrid(surface, opt_cfg.n_rings, opt_cfg.r_far, opt_cfg.stretch);
      g = evaluate_gradient(mesh, flow_cfg);
    } catch (const std::exception& ex) {
      hist.halted_on_failure = true;
      hist.failure_reason = ex.what();
      break;
    }

    IterationRecord rec;
    rec.iter = iter;
    rec.drag = g.drag_value;
    rec.volume = obstacle_volume(surface);
    rec.grad_inf_norm = inf_norm(g.df);
    rec.method = method_name(opt_cfg.method);

    if (opt_cfg.snapshot_every > 0 && iter % opt_cfg.snapshot_every == 0)
      hist.designs.push_back(surface);

    if (iter == opt_cfg.max_iters || rec.grad_inf_norm < opt_cfg.grad_tol) {
      hist.records.push_back(rec);
      break;
    }
    if (iter > 0 && g.drag_value > prev_drag) {
      if (++rising >= 5) {
        hist.records.push_back(rec);
        hist.failure_reason = "drag increased for 5 consecutive iterations";
        break;
      }
    } else {
      rising = 0;
    }
    prev_drag = g.drag_value;

    SymbolCoefficients symbols;
    if (opt_cfg.method == Method::local)
      symbols = analytic_betas(mesh, g.flow, g.adj, flow_cfg);

    SurfaceField eps_field;
    SurfaceField p = search_direction(opt_cfg.method, g.df, symbols, opt_cfg,
                                      &eps_field);
    if (opt_cfg.method == Method::local) hist.epsilons.push_back(eps_field);

    // fold the quadrature weights into the update, then kill the volume mode
    const std::vector<double> w = trapezoid_weights(surface.seg_len);
    for (std::size_t j = 0; j < p.size(); ++j) p[j] *= w[j];
    p = volume_project(p, surface);
    rec.step_inf_norm = opt_cfg.gamma * inf_norm(p);
    hist.records.push_back(rec);

    try {
      SurfaceCurve updated = perturb_surface(surface, p, opt_cfg.gamma);
      // re-parametrize first: sliding nodes along the polyline perturbs the
      // enclosed area, so the exact volume restore must come last
      updated = reparametrize_uniform(updated);
      surface = volume_restore(updated, v0, opt_cfg.volume_tol);
    } catch (const std::exception& ex) {
      hist.halted_on_failure = true;
      hist.failure_reason = ex.what();
      break;
    }
  }
  hist.final_surface = surface;
  return hist;
}

}  // namespace shapeopt

#include "shapeopt/symbol_lab.hpp"

#include <cmath>
#include <stdexcept>

#include "shapeopt/errors.hpp"

namespace shapeopt {

SymbolCoefficients analytic_betas(const OGridMesh& mesh, const FlowState& flow,
                                  const AdjointState& adj, const FlowConfig& cfg) {
  const std::size_t nn = mesh.n_nodes();
  std::vector<double> vx(nn), vy(nn), lx(nn), ly(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    vx[i] = flow.v[i].x;
    vy[i] = flow.v[i].y;
    lx[i] = adj.lambda[i].x;
    ly[i] = adj.lambda[i].y;
  }
  const SurfaceField dvx = wall_normal_derivative(mesh, vx, 1);
  const SurfaceField dvy = wall_normal_derivative(mesh, vy, 1);
  const SurfaceField dlx = wall_normal_derivative(mesh, lx, 1);
  const SurfaceField dly = wall_normal_derivative(mesh, ly, 1);
  const SurfaceField d2vx = wall_normal_derivative(mesh, vx, 2);
  const SurfaceField d2vy = wall_normal_derivative(mesh, vy, 2);
  const SurfaceField d2lx = wall_normal_derivative(mesh, lx, 2);
  const SurfaceField d2ly = wall_normal_derivative(mesh, ly, 2);

  const std::size_t n = mesh.n_surface();
  SymbolCoefficients c;
  c.beta1 = SurfaceField(n);
  c.beta2 = SurfaceField(n);
  c.beta1.seg_len = c.beta2.seg_len = mesh.surface.seg_len;
  for (std::size_t j = 0; j < n; ++j) {
    // beta2 = 2 df (same sign convention as the shape gradient)
    c.beta2[j] = 2.0 * cfg.mu * (dlx[j] * dvx[j] + dly[j] * dvy[j]);
    c.beta1[j] = cfg.mu * (d2vx[j] * dlx[j] + dvx[j] * d2lx[j] +
                           d2vy[j] * dly[j] + dvy[j] * d2ly[j]);
  }
  return c;
}

SurfaceField fd_hessian_response(const OGridMesh& base, const FlowConfig& cfg,
                                 const SurfaceField& base_df, double /*base_drag*/,
                                 const SurfaceField& alpha, double eps,
                                 double* eps_used) {
  const std::size_t n = base.n_surface();
  if (alpha.size() != n || base_df.size() != n)
    throw std::invalid_argument("fd_hessian_response: size mismatch");

  for (int attempt = 0; attempt < 5; ++attempt) {
    try {
      const SurfaceCurve pert = perturb_surface(base.surface, alpha, eps);
      const OGridMesh pmesh = regenerate_mesh(base, pert);
      const GradientEval g = evaluate_gradient(pmesh, cfg);
      SurfaceField h(n);
      h.seg_len = base.surface.seg_len;
      for (std::size_t j = 0; j < n; ++j) h[j] = (g.df[j] - base_df[j]) / eps;
      if (eps_used) *eps_used = eps;
      return h;
    } catch (const MeshError&) {
      eps *= 0.5;  // halving retry on tangling / self-intersection
    }
  }
  throw MeshError("fd_hessian_response: mesh regeneration kept failing");
}

long circular_phase_lag(const SurfaceField& a, const SurfaceField& b) {
  const long n = static_cast<long>(a.size());
  if (b.size() != a.size())
    throw std::invalid_argument("circular_phase_lag: size mismatch");
  std::vector<double> corr(static_cast<std::size_t>(n));
  double cbest = -1e300;
  for (long lag = 0; lag < n; ++lag) {
    double c = 0.0;
    for (long j = 0; j < n; ++j) c += a.at_periodic(j) * b.at_periodic(j + lag);
    corr[static_cast<std::size_t>(lag)] = c;
    cbest = std::max(cbest, c);
  }
  // tone-periodic signals tie every period; prefer the smallest |lag|
  long best = 0;
  long best_abs = n;
  const double tol = 1e-9 * std::abs(cbest);
  for (long lag = 0; lag < n; ++lag) {
    const long signed_lag = lag > n / 2 ? lag - n : lag;
    if (corr[static_cast<std::size_t>(lag)] >= cbest - tol &&
        std::abs(signed_lag) < best_abs) {
      best = signed_lag;
      best_abs = std::abs(signed_lag);
    }
  }
  return best;
}

StationFit fit_scaling(const std::vector<std::pair<double, SurfaceField>>& responses,
                       const SurfaceCurve& surface, double xi1_star) {
  if (responses.size() < 2)
    throw std::invalid_argument("fit_scaling: need at least 2 frequencies");
  for (std::size_t i = 1; i < responses.size(); ++i)
    if (responses[i].first == responses[0].first && responses.size() == 2)
      throw std::invalid_argument("fit_scaling: degenerate probe frequencies");

  // node nearest the station
  std::size_t jstar = 0;
  double dbest = 1e300;
  for (std::size_t j = 0; j < surface.size(); ++j) {
    const double d = std::abs(surface.xi1[j] - xi1_star);
    if (d < dbest) {
      dbest = d;
      jstar = j;
    }
  }

  const double m = static_cast<double>(responses.size());
  double sw = 0.0, sa = 0.0, sww = 0.0, swa = 0.0;
  for (const auto& [om, h] : responses) {
    const double amp = h[jstar];
    sw += om;
    sa += amp;
    sww += om * om;
    swa += om * amp;
  }
  const double det = m * sww - sw * sw;
  if (det == 0.0) throw std::invalid_argument("fit_scaling: degenerate frequencies");
  StationFit fit;
  fit.xi1_star = xi1_star;
  fit.beta2_fd = (m * swa - sw * sa) / det;
  fit.beta1_fd = (sa - fit.beta2_fd * sw) / m;

  double ss_res = 0.0, ss_tot = 0.0;
  const double mean = sa / m;
  for (const auto& [om, h] : responses) {
    const double amp = h[jstar];
    const double pred = fit.beta1_fd + fit.beta2_fd * om;
    ss_res += (amp - pred) * (amp - pred);
    ss_tot += (amp - mean) * (amp - mean);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

SymbolReport beta_sweep(const OGridMesh& base, const FlowConfig& cfg,
                        const std::vector<double>& omega_list,
                        const std::vector<double>& xi1_list, double eps) {
  SymbolReport report;
  report.omegas = omega_list;
  if (xi1_list.empty()) return report;

  const GradientEval g = evaluate_gradient(base, cfg);
  report.analytic = analytic_betas(base, g.flow, g.adj, cfg);

  for (const double xi1_star : xi1_list) {
    std::vector<std::pair<double, SurfaceField>> responses;
    for (const double omega : omega_list) {
      ProbeResult pr;
      pr.omega = omega;
      pr.shift = -omega * xi1_star;  // align so alpha(xi1_star) = 1
      pr.alpha = fourier_mode(base.surface, omega, pr.shift);
      try {
        pr.response = fd_hessian_response(base, cfg, g.df, g.drag_value, pr.alpha,
                                          eps, &pr.eps_used);
        pr.phase_lag = circular_phase_lag(pr.alpha, pr.response);
        pr.ok = true;
        responses.emplace_back(omega, pr.response);
      } catch (const std::exception& ex) {
        pr.error = ex.what();
      }
      report.probes.push_back(std::move(pr));
    }
    if (responses.size() >= 2)
      report.stations.push_back(fit_scaling(responses, base.surface, xi1_star));
  }
  return report;
}

}  // namespace shapeopt

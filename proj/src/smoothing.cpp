#include "shapeopt/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "shapeopt/errors.hpp"
#include "shapeopt/spectral.hpp"

namespace shapeopt {

SurfaceField modify_beta1(const SurfaceField& beta1, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("modify_beta1: eta must be positive");
  const double mn = *std::min_element(beta1.values.begin(), beta1.values.end());
  const double shift = eta - std::min(0.0, mn);
  SurfaceField out = beta1;
  for (double& v : out.values) v += shift;
  return out;
}

WindowedSpectrum windowed_dft(const SurfaceField& df, double window_width) {
  const std::size_t n = df.size();
  if (n < 4) throw std::invalid_argument("windowed_dft: need at least 4 nodes");
  if (df.seg_len.size() != n)
    throw std::invalid_argument("windowed_dft: field lacks arclength metadata");
  if (!(window_width > 0.0))
    throw std::invalid_argument("windowed_dft: window width must be positive");

  const double L = std::accumulate(df.seg_len.begin(), df.seg_len.end(), 0.0);
  const double sigma = window_width * static_cast<double>(n);  // in node units

  WindowedSpectrum s;
  s.window.resize(n);
  double gsum = 0.0;
  for (std::size_t d = 0; d < n; ++d) {
    double g = 0.0;
    for (int r = -2; r <= 2; ++r) {
      const double dd = static_cast<double>(d) + static_cast<double>(r) * n;
      g += std::exp(-0.5 * dd * dd / (sigma * sigma));
    }
    s.window[d] = g;
    gsum += g;
  }
  for (double& g : s.window) g /= gsum;

  s.omega.resize(n);
  for (std::size_t l = 0; l < n; ++l)
    s.omega[l] = 2.0 * M_PI * static_cast<double>(std::min(l, n - l)) / L;

  s.coeff.resize(n);
  std::vector<double> y(n);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = 0; k < n; ++k)
      y[k] = df[k] * s.window[(k + n - m) % n];
    s.coeff[m] = dft_real(y);
  }
  return s;
}

namespace {

// golden-section minimization on [a, b], interval tolerance tol
double golden_min(double a, double b, double tol, const auto& f) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

SurfaceField optimize_epsilon(const SurfaceField& beta1_bar,
                              const SurfaceField& beta2_abs,
                              const WindowedSpectrum& spectrum) {
  const std::size_t n = beta1_bar.size();
  if (beta2_abs.size() != n || spectrum.size() != n)
    throw std::invalid_argument("optimize_epsilon: size mismatch");
  const double L = 2.0 * M_PI / spectrum.omega[1];

  SurfaceField eps(n);
  eps.seg_len = beta1_bar.seg_len;
  std::vector<double> W(n), T(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double b = beta1_bar[j];
    if (!(b > 0.0)) throw std::invalid_argument("optimize_epsilon: beta1_bar <= 0");
    const double b2 = std::abs(beta2_abs[j]);
    const double eps_max = b * (L / (2.0 * M_PI)) * (L / (2.0 * M_PI));

    double wtot = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
      W[k] = std::norm(spectrum.coeff[j][k]);
      T[k] = 1.0 / (b + b2 * spectrum.omega[k]);
      wtot += W[k];
    }
    if (!(wtot > 0.0)) {
      eps[j] = 0.0;  // flat spectrum: objective identically zero
      continue;
    }

    auto obj = [&](double e) {
      double f = 0.0;
      for (std::size_t k = 1; k < n; ++k) {
        const double om = spectrum.omega[k];
        const double d = 1.0 / (b - e * om * om) - T[k];
        f += W[k] * d * d;
      }
      return f;
    };

    // coarse global scan to bracket the minimum, then golden-section refine
    const int ns = 200;
    int best = 0;
    double fbest = obj(0.0);
    for (int i = 1; i <= ns; ++i) {
      const double e = -eps_max * static_cast<double>(i) / ns;
      const double fe = obj(e);
      if (fe < fbest) {
        fbest = fe;
        best = i;
      }
    }
    const double lo = -eps_max * static_cast<double>(std::min(best + 1, ns)) / ns;
    const double hi = -eps_max * static_cast<double>(std::max(best - 1, 0)) / ns;
    const double e_star = golden_min(lo, hi, 1e-10 * eps_max, obj);
    // tie-break toward no smoothing on flat objectives
    eps[j] = (obj(0.0) <= obj(e_star) * (1.0 + 1e-12)) ? 0.0 : e_star;
  }
  return eps;
}

PreconditionerSpec assemble_preconditioner(const SurfaceField& beta1_bar,
                                           const SurfaceField& eps, double dxi,
                                           double eta) {
  if (beta1_bar.size() != eps.size())
    throw std::invalid_argument("assemble_preconditioner: size mismatch");
  if (!(dxi > 0.0))
    throw std::invalid_argument("assemble_preconditioner: spacing must be positive");
  for (std::size_t j = 0; j < eps.size(); ++j) {
    if (eps[j] > 0.0)
      throw std::invalid_argument("assemble_preconditioner: eps must be <= 0");
    if (beta1_bar[j] < eta - 1e-12)
      throw std::invalid_argument("assemble_preconditioner: beta1_bar below eta");
  }
  PreconditionerSpec spec;
  spec.eta = eta;
  spec.beta1_bar = beta1_bar.values;
  spec.eps = eps.values;
  spec.dxi = dxi;
  return spec;
}

std::vector<double> solve_periodic_tridiagonal(const std::vector<double>& diag,
                                               const std::vector<double>& lower,
                                               const std::vector<double>& upper,
                                               const std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  if (n < 3) throw std::invalid_argument("periodic tridiagonal: need n >= 3");
  if (lower.size() != n || upper.size() != n || rhs.size() != n)
    throw std::invalid_argument("periodic tridiagonal: size mismatch");

  // A = T + u v^T with u = (gamma, 0, ..., alpha)^T, v = (1, 0, ..., beta/gamma)^T,
  // alpha = A(n-1,0) = upper[n-1], beta = A(0,n-1) = lower[0]
  const double alpha = upper[n - 1];
  const double beta = lower[0];
  const double gamma = -diag[0];

  std::vector<double> d(diag);
  d[0] -= gamma;
  d[n - 1] -= alpha * beta / gamma;

  auto thomas = [&](const std::vector<double>& b) {
    std::vector<double> cp(n), x(n);
    double den = d[0];
    cp[0] = upper[0] / den;
    x[0] = b[0] / den;
    for (std::size_t i = 1; i < n; ++i) {
      den = d[i] - lower[i] * cp[i - 1];
      if (den == 0.0) throw SolverError("periodic tridiagonal: zero pivot");
      cp[i] = (i + 1 < n ? upper[i] : 0.0) / den;
      x[i] = (b[i] - lower[i] * x[i - 1]) / den;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];
    return x;
  };

  const std::vector<double> y = thomas(rhs);
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = alpha;
  const std::vector<double> z = thomas(u);

  const double vy = y[0] + (beta / gamma) * y[n - 1];
  const double vz = z[0] + (beta / gamma) * z[n - 1];
  const double fac = vy / (1.0 + vz);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = y[i] - fac * z[i];
  return x;
}

SurfaceField apply_preconditioner(const PreconditionerSpec& spec,
                                  const SurfaceField& df) {
  const std::size_t n = spec.size();
  if (df.size() != n)
    throw std::invalid_argument("apply_preconditioner: size mismatch");

  std::vector<double> d(n), lo(n), up(n), rhs(n);
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = spec.diag(j);
    lo[j] = up[j] = spec.off(j);
    rhs[j] = -df[j];
  }
  std::vector<double> p = solve_periodic_tridiagonal(d, lo, up, rhs);

  double rmax = 0.0, fmax = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double bp = lo[j] * p[(j + n - 1) % n] + d[j] * p[j] + up[j] * p[(j + 1) % n];
    rmax = std::max(rmax, std::abs(bp + df[j]));
    fmax = std::max(fmax, std::abs(df[j]));
  }
  if (rmax > 1e-10 * std::max(fmax, 1e-300))
    throw SolverError("apply_preconditioner: residual above tolerance");

  SurfaceField out(n);
  out.values = std::move(p);
  out.seg_len = df.seg_len;
  return out;
}

SurfaceField sobolev_smooth(const SurfaceField& df, double eps_d, double dxi) {
  if (eps_d < 0.0) throw std::invalid_argument("sobolev_smooth: eps_d must be >= 0");
  PreconditionerSpec spec;
  spec.eta = 1.0;
  spec.beta1_bar.assign(df.size(), 1.0);
  spec.eps.assign(df.size(), -eps_d);
  spec.dxi = dxi;
  return apply_preconditioner(spec, df);
}

}  // namespace shapeopt

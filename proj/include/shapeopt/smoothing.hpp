#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "shapeopt/surface_field.hpp"

namespace shapeopt {

/// Windowed DFT of a periodic surface signal:
///   coeff(m, l) = sum_k df_k g_{k-m} exp(-i 2 pi k l / N)
/// with a periodic Gaussian window g (unit sum). omega[l] is the physical
/// wavenumber 2 pi min(l, N-l) / L on the arclength parametrization.
struct WindowedSpectrum {
  std::vector<std::vector<std::complex<double>>> coeff;  // [m][l]
  std::vector<double> window;                            // g, length N
  std::vector<double> omega;                             // length N

  std::size_t size() const { return coeff.size(); }
};

/// Periodic tridiagonal preconditioner B of size N:
///   row j:  (eps_j/dxi^2) p_{j-1} + (beta1_bar_j - 2 eps_j/dxi^2) p_j
///         + (eps_j/dxi^2) p_{j+1}
/// Every eigenvalue is >= eta by the Gershgorin bound.
struct PreconditionerSpec {
  double eta = 0.0;
  std::vector<double> beta1_bar;
  std::vector<double> beta2_abs;  // informational, may be empty
  std::vector<double> eps;        // all <= 0
  double dxi = 0.0;               // mean node spacing

  std::size_t size() const { return beta1_bar.size(); }
  double diag(std::size_t j) const { return beta1_bar[j] - 2.0 * eps[j] / (dxi * dxi); }
  double off(std::size_t j) const { return eps[j] / (dxi * dxi); }
};

/// beta1_bar = eta + beta1 - min(0, min_k beta1_k), so min beta1_bar >= eta.
SurfaceField modify_beta1(const SurfaceField& beta1, double eta);

/// window_width is the Gaussian standard deviation as a fraction of the
/// perimeter (default 1/16). df must carry segment lengths.
WindowedSpectrum windowed_dft(const SurfaceField& df, double window_width = 1.0 / 16.0);

/// Per-node smoothing parameter selection: eps_j minimizes
///   sum_{k != 0} |d~(j,k)|^2 (1/(beta1_bar_j - eps omega_k^2)
///                             - 1/(beta1_bar_j + |beta2_j| omega_k))^2
/// over [-eps_max, 0] with eps_max = beta1_bar_j (L / 2 pi)^2, by bracketed
/// golden-section search; flat objectives tie-break to 0 (no smoothing).
SurfaceField optimize_epsilon(const SurfaceField& beta1_bar,
                              const SurfaceField& beta2_abs,
                              const WindowedSpectrum& spectrum);

PreconditionerSpec assemble_preconditioner(const SurfaceField& beta1_bar,
                                           const SurfaceField& eps, double dxi,
                                           double eta);

/// Solves B p = -df by the Thomas algorithm with a Sherman-Morrison rank-1
/// correction for the periodic corners.
SurfaceField apply_preconditioner(const PreconditionerSpec& spec,
                                  const SurfaceField& df);

/// Global Sobolev baseline: p = -(1 - eps_d d^2/dxi1^2)^{-1} df with the
/// damping sign, i.e. the constant-coefficient case of the solver above.
SurfaceField sobolev_smooth(const SurfaceField& df, double eps_d, double dxi);

/// Generic periodic tridiagonal solve, row j: lower_j x_{j-1} + diag_j x_j +
/// upper_j x_{j+1} = rhs_j with periodic wrap (lower_0 couples to x_{N-1}).
std::vector<double> solve_periodic_tridiagonal(const std::vector<double>& diag,
                                               const std::vector<double>& lower,
                                               const std::vector<double>& upper,
                                               const std::vector<double>& rhs);

}  // namespace shapeopt

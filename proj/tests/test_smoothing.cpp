#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>

#include "shapeopt/errors.hpp"
#include "shapeopt/smoothing.hpp"

using namespace shapeopt;

namespace {

constexpr double kPi = 3.14159265358979323846;

SurfaceField uniform_field(std::vector<double> v) {
  const std::size_t n = v.size();
  SurfaceField f(std::move(v), std::vector<double>(n, 2.0 * kPi / n));
  return f;
}

Eigen::MatrixXd dense_matrix(const PreconditionerSpec& spec) {
  const std::size_t n = spec.size();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    b(j, j) = spec.diag(j);
    b(j, (j + 1) % n) += spec.off(j);
    b(j, (j + n - 1) % n) += spec.off(j);
  }
  return b;
}

// spectrum with prescribed weight on exact frequency bins (no window leakage)
WindowedSpectrum synthetic_spectrum(std::size_t n,
                                    const std::vector<std::pair<std::size_t, double>>& tones) {
  WindowedSpectrum sp;
  sp.omega.resize(n);
  for (std::size_t l = 0; l < n; ++l)
    sp.omega[l] = static_cast<double>(std::min(l, n - l));
  sp.window.assign(n, 1.0 / n);
  sp.coeff.assign(n, std::vector<std::complex<double>>(n, 0.0));
  for (std::size_t m = 0; m < n; ++m)
    for (const auto& [l, a] : tones) sp.coeff[m][l] = a;
  return sp;
}

double brute_force_epsilon(double b1, double b2, const WindowedSpectrum& sp,
                           std::size_t node, double eps_max, int points) {
  double best_e = 0.0, best_obj = 1e300;
  const std::size_t n = sp.omega.size();
  for (int i = 0; i <= points; ++i) {
    const double e = -eps_max * static_cast<double>(i) / points;
    double obj = 0.0;
    for (std::size_t l = 1; l < n; ++l) {
      const double om = sp.omega[l];
      if (om == 0.0) continue;
      const double w = std::norm(sp.coeff[node][l]);
      const double d = 1.0 / (b1 - e * om * om) - 1.0 / (b1 + b2 * om);
      obj += w * d * d;
    }
    if (obj < best_obj) {
      best_obj = obj;
      best_e = e;
    }
  }
  return best_e;
}

}  // namespace

TEST_CASE("modify_beta1 all-positive branch") {
  const SurfaceField out = modify_beta1(uniform_field({1.0, 2.0, 3.0}), 0.2);
  CHECK(out[0] == doctest::Approx(1.2));
  CHECK(out[1] == doctest::Approx(2.2));
  CHECK(out[2] == doctest::Approx(3.2));
}

TEST_CASE("modify_beta1 shifts by the negative minimum") {
  const SurfaceField out = modify_beta1(uniform_field({-1.0, 0.0, 2.0}), 0.2);
  CHECK(out[0] == doctest::Approx(0.2));
  CHECK(out[1] == doctest::Approx(1.2));
  CHECK(out[2] == doctest::Approx(3.2));
}

TEST_CASE("modify_beta1 of zero field is the constant eta") {
  const SurfaceField out = modify_beta1(uniform_field({0.0, 0.0, 0.0, 0.0}), 0.2);
  for (std::size_t j = 0; j < out.size(); ++j) CHECK(out[j] == doctest::Approx(0.2));
}

TEST_CASE("windowed_dft of zero signal is zero") {
  const WindowedSpectrum sp = windowed_dft(uniform_field(std::vector<double>(16, 0.0)));
  for (const auto& row : sp.coeff)
    for (const auto& c : row) CHECK(std::abs(c) < 1e-14);
}

TEST_CASE("windowed_dft window is nonnegative with unit sum") {
  const WindowedSpectrum sp = windowed_dft(uniform_field(std::vector<double>(32, 1.0)));
  double s = 0.0;
  for (double g : sp.window) {
    CHECK(g >= 0.0);
    s += g;
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("windowed_dft concentrates a pure tone at its mode index") {
  const std::size_t n = 64;
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = std::cos(2.0 * kPi * 5.0 * k / n);
  // wide window: a quarter of the perimeter
  const WindowedSpectrum sp = windowed_dft(uniform_field(std::move(v)), 0.25);
  for (std::size_t m = 0; m < n; ++m) {
    const double at5 = std::abs(sp.coeff[m][5]);
    for (std::size_t l = 0; l < n; ++l) {
      if (l == 5 || l == n - 5) continue;
      CHECK(std::abs(sp.coeff[m][l]) < at5);
    }
  }
}

TEST_CASE("windowed_dft conjugate symmetry for real input") {
  const std::size_t n = 16;
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = std::sin(0.7 * k) + 0.3 * k;
  const WindowedSpectrum sp = windowed_dft(uniform_field(std::move(v)));
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t l = 1; l < n; ++l) {
      CHECK(sp.coeff[m][l].real() ==
            doctest::Approx(sp.coeff[m][n - l].real()).epsilon(1e-10));
      CHECK(sp.coeff[m][l].imag() ==
            doctest::Approx(-sp.coeff[m][n - l].imag()).epsilon(1e-10));
    }
}

TEST_CASE("windowed_dft near-delta window has no frequency resolution") {
  const std::size_t n = 32;
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = std::cos(2.0 * kPi * 3.0 * k / n) + 0.5;
  const SurfaceField f = uniform_field(v);
  // width far below one node spacing: g collapses onto a single node
  const WindowedSpectrum sp = windowed_dft(f, 1e-3 / n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t l = 0; l < n; ++l)
      CHECK(std::abs(sp.coeff[m][l]) == doctest::Approx(std::abs(v[m])).epsilon(1e-8));
}

TEST_CASE("optimize_epsilon ties an all-DC spectrum off to zero") {
  const std::size_t n = 16;
  const WindowedSpectrum sp = synthetic_spectrum(n, {{0, 3.0}});
  const SurfaceField b1 = uniform_field(std::vector<double>(n, 1.0));
  const SurfaceField b2 = uniform_field(std::vector<double>(n, 2.0));
  const SurfaceField eps = optimize_epsilon(b1, b2, sp);
  for (std::size_t j = 0; j < n; ++j) CHECK(eps[j] == 0.0);
}

TEST_CASE("optimize_epsilon matches a single tone exactly") {
  const std::size_t n = 64;
  const double omega_star = 8.0;
  const WindowedSpectrum sp = synthetic_spectrum(n, {{8, 1.0}});
  const double b1v = 1.5, b2v = 0.8;
  const SurfaceField b1 = uniform_field(std::vector<double>(n, b1v));
  const SurfaceField b2 = uniform_field(std::vector<double>(n, b2v));
  const SurfaceField eps = optimize_epsilon(b1, b2, sp);
  for (std::size_t j = 0; j < n; ++j) {
    CHECK(eps[j] == doctest::Approx(-b2v / omega_star).epsilon(1e-6));
    const double d = 1.0 / (b1v - eps[j] * omega_star * omega_star) -
                     1.0 / (b1v + b2v * omega_star);
    CHECK(d * d < 1e-20);
  }
}

TEST_CASE("optimize_epsilon agrees with a brute-force scan on two-tone spectra") {
  const std::size_t n = 32;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> amp(0.2, 2.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> v(n);
    const double a1 = amp(rng), a2 = amp(rng);
    for (std::size_t k = 0; k < n; ++k)
      v[k] = a1 * std::cos(2.0 * kPi * 3.0 * k / n) +
             a2 * std::cos(2.0 * kPi * 9.0 * k / n);
    const SurfaceField df = uniform_field(std::move(v));
    const WindowedSpectrum sp = windowed_dft(df, 10.0);
    const double b1v = amp(rng) + 0.5, b2v = amp(rng);
    const SurfaceField b1 = uniform_field(std::vector<double>(n, b1v));
    const SurfaceField b2 = uniform_field(std::vector<double>(n, b2v));
    const SurfaceField eps = optimize_epsilon(b1, b2, sp);
    const double l = 2.0 * kPi;
    const double eps_max = b1v * (l / (2.0 * kPi)) * (l / (2.0 * kPi));
    const double oracle = brute_force_epsilon(b1v, b2v, sp, 0, eps_max, 10000);
    CHECK(std::abs(eps[0] - oracle) <= 1e-4 * eps_max);
  }
}

TEST_CASE("assemble_preconditioner with zero eps is diagonal") {
  const std::size_t n = 8;
  const SurfaceField b1 = uniform_field({1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0});
  const SurfaceField eps = uniform_field(std::vector<double>(n, 0.0));
  const PreconditionerSpec spec = assemble_preconditioner(b1, eps, 0.1, 0.5);
  for (std::size_t j = 0; j < n; ++j) {
    CHECK(spec.diag(j) == doctest::Approx(b1[j]));
    CHECK(spec.off(j) == 0.0);
  }
}

TEST_CASE("assemble_preconditioner rejects positive eps") {
  const SurfaceField b1 = uniform_field({1.0, 1.0, 1.0, 1.0});
  const SurfaceField eps = uniform_field({0.0, 1e-8, 0.0, 0.0});
  CHECK_THROWS_AS(assemble_preconditioner(b1, eps, 0.1, 0.5), std::invalid_argument);
}

TEST_CASE("constant-coefficient preconditioner matches circulant eigenvalues") {
  const std::size_t n = 16;
  const double b = 1.3, e = -0.4, h = 0.2;
  const SurfaceField b1 = uniform_field(std::vector<double>(n, b));
  const SurfaceField eps = uniform_field(std::vector<double>(n, e));
  const PreconditionerSpec spec = assemble_preconditioner(b1, eps, h, 0.5);
  Eigen::VectorXd lam =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dense_matrix(spec)).eigenvalues();
  std::vector<double> expect(n);
  for (std::size_t k = 0; k < n; ++k)
    expect[k] = b - (2.0 * e / (h * h)) * (1.0 - std::cos(2.0 * kPi * k / n));
  std::sort(expect.begin(), expect.end());
  for (std::size_t k = 0; k < n; ++k) {
    CHECK(lam(k) == doctest::Approx(expect[k]).epsilon(1e-10));
    CHECK(lam(k) >= b - 1e-12);
  }
}

TEST_CASE("randomized specs keep the eigenvalue floor at eta") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double eta = 0.2;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 8 + 4 * (trial % 5);
    std::vector<double> raw(n);
    for (double& r : raw) r = 2.0 * u(rng);
    const SurfaceField b1 = modify_beta1(uniform_field(raw), eta);
    std::vector<double> ev(n);
    for (double& r : ev) r = -std::abs(u(rng));
    const SurfaceField eps = uniform_field(ev);
    const PreconditionerSpec spec = assemble_preconditioner(b1, eps, 0.15, eta);
    // B is nonsymmetric for varying eps; Gershgorin still bounds the
    // real parts of all (possibly complex) eigenvalues
    const Eigen::EigenSolver<Eigen::MatrixXd> es(dense_matrix(spec));
    const Eigen::VectorXd re = es.eigenvalues().real();
    CHECK(re.minCoeff() >= eta - 1e-10);
    double lo = 1e300, hi = -1e300;
    for (std::size_t j = 0; j < n; ++j) {
      lo = std::min(lo, spec.beta1_bar[j]);
      hi = std::max(hi, spec.beta1_bar[j] - 4.0 * spec.eps[j] / (spec.dxi * spec.dxi));
    }
    CHECK(re.minCoeff() >= lo - 1e-10);
    CHECK(re.maxCoeff() <= hi + 1e-10);
  }
}

TEST_CASE("apply_preconditioner with identity B negates the input") {
  const std::size_t n = 8;
  const SurfaceField b1 = uniform_field(std::vector<double>(n, 1.0));
  const SurfaceField eps = uniform_field(std::vector<double>(n, 0.0));
  const PreconditionerSpec spec = assemble_preconditioner(b1, eps, 0.1, 0.5);
  SurfaceField df = uniform_field({1.0, -2.0, 3.0, 0.5, 0.0, 4.0, -1.0, 2.0});
  const SurfaceField p = apply_preconditioner(spec, df);
  for (std::size_t j = 0; j < n; ++j) CHECK(p[j] == doctest::Approx(-df[j]));
}

TEST_CASE("apply_preconditioner on a constant rhs divides by beta1_bar") {
  const std::size_t n = 12;
  const double b = 2.5, c = 3.0;
  const SurfaceField b1 = uniform_field(std::vector<double>(n, b));
  const SurfaceField eps = uniform_field(std::vector<double>(n, -0.7));
  const PreconditionerSpec spec = assemble_preconditioner(b1, eps, 0.3, 0.5);
  const SurfaceField p = apply_preconditioner(spec, uniform_field(std::vector<double>(n, c)));
  for (std::size_t j = 0; j < n; ++j)
    CHECK(p[j] == doctest::Approx(-c / b).epsilon(1e-12));
}

TEST_CASE("apply_preconditioner matches a dense LU oracle") {
  const std::size_t n = 64;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> b1v(n), ev(n), dfv(n);
  for (std::size_t j = 0; j < n; ++j) {
    b1v[j] = 1.0 + std::abs(u(rng));
    ev[j] = -std::abs(u(rng));
    dfv[j] = u(rng);
  }
  const PreconditionerSpec spec =
      assemble_preconditioner(uniform_field(b1v), uniform_field(ev), 0.1, 0.5);
  const SurfaceField p = apply_preconditioner(spec, uniform_field(dfv));
  const Eigen::MatrixXd b = dense_matrix(spec);
  Eigen::VectorXd rhs(n);
  for (std::size_t j = 0; j < n; ++j) rhs(j) = -dfv[j];
  const Eigen::VectorXd x = b.partialPivLu().solve(rhs);
  for (std::size_t j = 0; j < n; ++j)
    CHECK(p[j] == doctest::Approx(x(j)).epsilon(1e-10));
}

TEST_CASE("solve_periodic_tridiagonal matches dense LU across sizes") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const std::size_t n : {8UL, 64UL, 256UL}) {
    std::vector<double> diag(n), lower(n), upper(n), rhs(n);
    for (std::size_t j = 0; j < n; ++j) {
      lower[j] = u(rng);
      upper[j] = u(rng);
      diag[j] = 4.0 + u(rng);  // diagonally dominant, safely nonsingular
      rhs[j] = u(rng);
    }
    const std::vector<double> x = solve_periodic_tridiagonal(diag, lower, upper, rhs);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd b(n);
    for (std::size_t j = 0; j < n; ++j) {
      a(j, j) = diag[j];
      a(j, (j + 1) % n) += upper[j];
      a(j, (j + n - 1) % n) += lower[j];
      b(j) = rhs[j];
    }
    const Eigen::VectorXd y = a.partialPivLu().solve(b);
    double err = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      err = std::max(err, std::abs(x[j] - y(j)));
      scale = std::max(scale, std::abs(y(j)));
    }
    CHECK(err <= 1e-10 * std::max(1.0, scale));
  }
}

TEST_CASE("sobolev_smooth with zero damping returns minus the input") {
  SurfaceField df = uniform_field({1.0, -1.0, 2.0, 0.0, 3.0, -2.0, 0.5, 1.5});
  // eps_d must be > 0 by contract; the limit is checked via a tiny value
  const SurfaceField p = sobolev_smooth(df, 1e-14, 2.0 * kPi / 8);
  for (std::size_t j = 0; j < 8; ++j)
    CHECK(p[j] == doctest::Approx(-df[j]).epsilon(1e-9));
}

TEST_CASE("sobolev_smooth rejects nonpositive damping") {
  SurfaceField df = uniform_field({1.0, 2.0, 3.0, 4.0});
  CHECK_THROWS_AS(sobolev_smooth(df, -0.1, 0.1), std::invalid_argument);
}

TEST_CASE("sobolev_smooth damps a cosine mode by the discrete symbol") {
  const std::size_t n = 64;
  const double h = 2.0 * kPi / n, eps_d = 0.05;
  for (const std::size_t k : {1UL, 4UL, 13UL}) {
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = std::cos(2.0 * kPi * k * j / n);
    const SurfaceField p = sobolev_smooth(uniform_field(v), eps_d, h);
    const double om2 = (2.0 / (h * h)) * (1.0 - std::cos(2.0 * kPi * k / n));
    const double expect = 1.0 / (1.0 + eps_d * om2);
    for (std::size_t j = 0; j < n; ++j)
      CHECK(p[j] == doctest::Approx(-expect * v[j]).epsilon(1e-10));
  }
}

TEST_CASE("sobolev_smooth with huge damping keeps only the mean") {
  const std::size_t n = 32;
  std::vector<double> v(n);
  double mean = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    v[j] = std::cos(2.0 * kPi * 3.0 * j / n) + 0.7;
    mean += v[j];
  }
  mean /= n;
  const SurfaceField p = sobolev_smooth(uniform_field(v), 1e3, 2.0 * kPi / n);
  for (std::size_t j = 0; j < n; ++j)
    CHECK(p[j] == doctest::Approx(-mean).epsilon(1e-3));
}

TEST_CASE("constant-eps damping factor decreases with frequency") {
  const std::size_t n = 64;
  const double h = 2.0 * kPi / n, b = 1.2, e = -0.3;
  const PreconditionerSpec spec = assemble_preconditioner(
      uniform_field(std::vector<double>(n, b)),
      uniform_field(std::vector<double>(n, e)), h, 0.5);
  double prev = 1e300;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = std::cos(2.0 * kPi * k * j / n);
    const SurfaceField p = apply_preconditioner(spec, uniform_field(v));
    // amplitude ratio out/in on the tone
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      num += -p[j] * v[j];
      den += v[j] * v[j];
    }
    const double ratio = num / den;
    CHECK(ratio <= 1.0 / b + 1e-12);
    CHECK(ratio < prev);
    prev = ratio;
  }
}

TEST_CASE("single-tone damping approximates the modified inverse symbol") {
  const std::size_t n = 128;
  const double h = 2.0 * kPi / n, b1 = 1.0, b2 = 0.6, omega_star = 6.0;
  const double e = -b2 / omega_star;  // exact symbol match for this tone
  const PreconditionerSpec spec = assemble_preconditioner(
      uniform_field(std::vector<double>(n, b1)),
      uniform_field(std::vector<double>(n, e)), h, 0.5);
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = std::cos(omega_star * j * h);
  const SurfaceField p = apply_preconditioner(spec, uniform_field(v));
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    num += -p[j] * v[j];
    den += v[j] * v[j];
  }
  CHECK(num / den == doctest::Approx(1.0 / (b1 + b2 * omega_star)).epsilon(0.05));
}

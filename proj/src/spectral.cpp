#include "shapeopt/spectral.hpp"

#include <cmath>

namespace shapeopt {

namespace {

using cd = std::complex<double>;

bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

// iterative radix-2 Cooley-Tukey, sign = -1 forward / +1 inverse (unscaled)
void fft_pow2(std::vector<cd>& a, double sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
    const cd wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cd w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cd u = a[i + k];
        const cd v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

std::vector<cd> direct(const std::vector<cd>& x, double sign) {
  const std::size_t n = x.size();
  std::vector<cd> out(n, cd(0.0, 0.0));
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < n; ++k) {
      const double ang =
          sign * 2.0 * M_PI * static_cast<double>(k * l % n) / static_cast<double>(n);
      out[l] += x[k] * cd(std::cos(ang), std::sin(ang));
    }
  }
  return out;
}

}  // namespace

std::vector<cd> dft(const std::vector<cd>& x) {
  if (is_pow2(x.size())) {
    std::vector<cd> a = x;
    fft_pow2(a, -1.0);
    return a;
  }
  return direct(x, -1.0);
}

std::vector<cd> dft_real(const std::vector<double>& x) {
  std::vector<cd> c(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) c[k] = cd(x[k], 0.0);
  return dft(c);
}

std::vector<cd> idft(const std::vector<cd>& X) {
  std::vector<cd> a;
  if (is_pow2(X.size())) {
    a = X;
    fft_pow2(a, +1.0);
  } else {
    a = direct(X, +1.0);
  }
  const double inv = 1.0 / static_cast<double>(X.size());
  for (cd& v : a) v *= inv;
  return a;
}

}  // namespace shapeopt

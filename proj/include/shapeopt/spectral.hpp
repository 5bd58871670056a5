#pragma once

#include <complex>
#include <vector>

namespace shapeopt {

/// Forward DFT, X_l = sum_k x_k exp(-i 2 pi k l / N). Radix-2 FFT for
/// power-of-two lengths, direct evaluation otherwise (N is small here).
std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x);

std::vector<std::complex<double>> dft_real(const std::vector<double>& x);

/// Inverse transform, x_k = (1/N) sum_l X_l exp(+i 2 pi k l / N).
std::vector<std::complex<double>> idft(const std::vector<std::complex<double>>& X);

}  // namespace shapeopt

#pragma once

#include <complex>
#include <span>
#include <vector>

namespace fce::fft {

// Unnormalized forward transform: X_k = sum_n x_n exp(-2 pi i k n / N).
std::vector<std::complex<double>> forward(std::span<const std::complex<double>> x);

// Inverse transform including the 1/N factor.
std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> x);

// Forward transform of a real sequence, bins 0 .. N/2.
std::vector<std::complex<double>> forward_real(std::span<const double> x);

}  // namespace fce::fft

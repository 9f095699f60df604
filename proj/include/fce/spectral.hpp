#pragma once

#include "fce/signal_model.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fce {

// One-sided Fourier coefficients of a sampled signal, bins 0 .. N/2.
//
// Normalized so that a unit cosine completing l whole cycles over the record
// shows |bins[l]| == 1:
//   bins[0] = (1/N) sum_n x_n
//   bins[l] = (2/N) sum_n x_n exp(-2 pi i l n / N),   l >= 1
struct Spectrum {
  std::vector<cplx> bins;
  double bin_width{1.0};  // Hz
  std::size_t signal_length{0};
};

// |V(t, xi)|^2 on a regular grid, row-major [frame][bin].
struct Spectrogram {
  std::vector<double> matrix;
  std::size_t frames{0};
  std::size_t bins{0};
  double time_step{0.0};  // s between frame centers
  double freq_step{0.0};  // Hz between bins
  double duration{0.0};   // s, length of the analyzed signal
  std::string window_descriptor;

  double at(std::size_t frame, std::size_t bin) const { return matrix[frame * bins + bin]; }
  double frequency(std::size_t bin) const { return static_cast<double>(bin) * freq_step; }
  double nyquist() const { return frequency(bins - 1); }
};

Spectrum dft(const SampledSignal& signal);

// |c_f|^2 / sum_{l=1..max_bin} |c_l|^2 with DC excluded.
// Throws PreconditionViolation on bad bin indices and ZeroDenominator when
// bins 1..max_bin are all zero.
double fundamental_energy_ratio(const Spectrum& spectrum, int fundamental_bin = 1,
                                int max_bin = 256);

struct StftOptions {
  std::size_t window_length{0};
  std::size_t hop{0};
  std::size_t fft_length{0};
};

// Window 2 s, hop 0.1 s, FFT length the next power of two covering both the
// window and 10 s of samples (bin width <= 0.1 Hz).
StftOptions default_stft_options(double sample_rate);

// Gaussian window truncated at +-4 sigma with sigma = window_length / 8.
// Frame j is centered on sample j * hop, zero-padded past either end; there
// are (N - 1) / hop + 1 frames. Each frame is scaled by (2 / sum w)^2 so a
// unit cosine peaks near 1. Throws SignalTooShort if N < window_length.
Spectrogram stft(const SampledSignal& signal, std::size_t window_length, std::size_t hop,
                 std::size_t fft_length);

inline Spectrogram stft(const SampledSignal& signal, const StftOptions& options) {
  return stft(signal, options.window_length, options.hop, options.fft_length);
}

// Percentile with linear interpolation between order statistics:
// rank = pct / 100 * (n - 1).
double percentile(std::span<const double> values, double pct);

// Clips all entries to [P_lo, P_hi] of the flattened matrix.
Spectrogram dynamic_range_clip(const Spectrogram& spectrogram, double lo_pct = 0.0,
                               double hi_pct = 99.95);

// sum over frames of the energy within +-half_width of if_curve[frame],
// divided by the energy in [band_floor, band_ceiling]. The tracking band is
// intersected with [band_floor, band_ceiling] so the result stays in [0, 1].
// Defaults: floor 1 / duration, ceiling Nyquist.
double band_energy_ratio(const Spectrogram& spectrogram, std::span<const double> if_curve,
                         double half_width = 0.2,
                         std::optional<double> band_floor = std::nullopt,
                         std::optional<double> band_ceiling = std::nullopt);

}  // namespace fce

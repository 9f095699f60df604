#include "fce/spectral.hpp"

#include "fce/errors.hpp"
#include "fce/fft.hpp"
#include "fce/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace fce {

Spectrum dft(const SampledSignal& signal) {
  const auto& x = signal.samples();
  const double n = static_cast<double>(x.size());
  Spectrum out;
  out.bins = fft::forward_real(x);
  out.bins[0] /= n;
  for (std::size_t l = 1; l < out.bins.size(); ++l) out.bins[l] *= 2.0 / n;
  out.bin_width = signal.sample_rate() / n;
  out.signal_length = x.size();
  return out;
}

double fundamental_energy_ratio(const Spectrum& spectrum, int fundamental_bin, int max_bin) {
  const int highest = static_cast<int>(spectrum.bins.size()) - 1;
  if (max_bin < 1 || max_bin > highest) {
    throw PreconditionViolation("fundamental_energy_ratio: max_bin " + std::to_string(max_bin) +
                                " outside 1.." + std::to_string(highest));
  }
  if (fundamental_bin < 1 || fundamental_bin > max_bin) {
    throw PreconditionViolation("fundamental_energy_ratio: fundamental_bin must be in 1..max_bin");
  }
  double total = 0.0;
  for (int l = 1; l <= max_bin; ++l) total += std::norm(spectrum.bins[l]);
  if (!(total > 0.0)) {
    throw ZeroDenominator("fundamental_energy_ratio: bins 1..max_bin carry no energy");
  }
  return std::norm(spectrum.bins[fundamental_bin]) / total;
}

StftOptions default_stft_options(double sample_rate) {
  StftOptions o;
  o.window_length = std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(2.0 * sample_rate)));
  o.hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(sample_rate / 10.0)));
  const auto span = std::max<std::size_t>(
      o.window_length, static_cast<std::size_t>(std::ceil(10.0 * sample_rate)));
  o.fft_length = std::bit_ceil(span);
  return o;
}

Spectrogram stft(const SampledSignal& signal, std::size_t window_length, std::size_t hop,
                 std::size_t fft_length) {
  if (window_length < 1 || hop < 1 || window_length > fft_length) {
    throw PreconditionViolation("stft: need 1 <= window_length <= fft_length and hop >= 1");
  }
  const auto& x = signal.samples();
  const std::size_t n = x.size();
  if (n < window_length) {
    throw SignalTooShort("stft: signal has " + std::to_string(n) + " samples, window needs " +
                         std::to_string(window_length));
  }

  const double sigma = static_cast<double>(window_length) / 8.0;
  const auto half = static_cast<std::ptrdiff_t>(window_length / 2);
  std::vector<double> window(window_length);
  double window_sum = 0.0;
  for (std::size_t j = 0; j < window_length; ++j) {
    const double u = (static_cast<double>(j) - static_cast<double>(half)) / sigma;
    window[j] = std::exp(-0.5 * u * u);
    window_sum += window[j];
  }
  const double scale = (2.0 / window_sum) * (2.0 / window_sum);

  Spectrogram out;
  out.frames = (n - 1) / hop + 1;
  out.bins = fft_length / 2 + 1;
  out.time_step = static_cast<double>(hop) / signal.sample_rate();
  out.freq_step = signal.sample_rate() / static_cast<double>(fft_length);
  out.duration = signal.duration();
  std::ostringstream desc;
  desc << "gaussian(length=" << window_length << ",sigma=length/8,truncation=4sigma),hop="
       << hop << ",fft_length=" << fft_length;
  out.window_descriptor = desc.str();
  out.matrix.assign(out.frames * out.bins, 0.0);

  parallel_for(out.frames, [&](std::size_t frame) {
    std::vector<double> buffer(fft_length, 0.0);
    const auto center = static_cast<std::ptrdiff_t>(frame * hop);
    bool any = false;
    for (std::size_t j = 0; j < window_length; ++j) {
      const std::ptrdiff_t idx = center - half + static_cast<std::ptrdiff_t>(j);
      if (idx < 0 || idx >= static_cast<std::ptrdiff_t>(n)) continue;
      buffer[j] = x[idx] * window[j];
      any = any || buffer[j] != 0.0;
    }
    if (!any) return;
    const auto spec = fft::forward_real(buffer);
    for (std::size_t k = 0; k < out.bins; ++k) {
      out.matrix[frame * out.bins + k] = std::norm(spec[k]) * scale;
    }
  });
  return out;
}

double percentile(std::span<const double> values, double pct) {
  if (values.empty()) throw PreconditionViolation("percentile: empty input");
  if (!(pct >= 0.0 && pct <= 100.0)) throw PreconditionViolation("percentile: pct outside [0, 100]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double rank = pct / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Spectrogram dynamic_range_clip(const Spectrogram& spectrogram, double lo_pct, double hi_pct) {
  if (!(lo_pct >= 0.0 && lo_pct < hi_pct && hi_pct <= 100.0)) {
    throw PreconditionViolation("dynamic_range_clip: need 0 <= lo_pct < hi_pct <= 100");
  }
  Spectrogram out = spectrogram;
  if (out.matrix.empty()) return out;
  const double lo = percentile(out.matrix, lo_pct);
  const double hi = percentile(out.matrix, hi_pct);
  for (double& v : out.matrix) v = std::clamp(v, lo, hi);
  return out;
}

double band_energy_ratio(const Spectrogram& spectrogram, std::span<const double> if_curve,
                         double half_width, std::optional<double> band_floor,
                         std::optional<double> band_ceiling) {
  if (if_curve.size() != spectrogram.frames) {
    throw PreconditionViolation("band_energy_ratio: if_curve has " +
                                std::to_string(if_curve.size()) + " entries, spectrogram has " +
                                std::to_string(spectrogram.frames) + " frames");
  }
  if (!(half_width > 0.0)) throw PreconditionViolation("band_energy_ratio: half_width must be > 0");
  const double floor = band_floor.value_or(1.0 / spectrogram.duration);
  const double ceiling = band_ceiling.value_or(spectrogram.nyquist());
  if (!(floor <= ceiling)) throw PreconditionViolation("band_energy_ratio: floor above ceiling");

  double inside = 0.0;
  double total = 0.0;
  for (std::size_t f = 0; f < spectrogram.frames; ++f) {
    const double lo = std::max(if_curve[f] - half_width, floor);
    const double hi = std::min(if_curve[f] + half_width, ceiling);
    bool hit = false;
    for (std::size_t k = 0; k < spectrogram.bins; ++k) {
      const double xi = spectrogram.frequency(k);
      const double v = spectrogram.at(f, k);
      if (xi >= floor && xi <= ceiling) total += v;
      if (xi >= lo && xi <= hi) {
        inside += v;
        hit = true;
      }
    }
    if (!hit) {
      throw EmptyBand("band_energy_ratio: no frequency bin within the band of frame " +
                      std::to_string(f));
    }
  }
  if (!(total > 0.0)) throw ZeroDenominator("band_energy_ratio: no energy in [floor, ceiling]");
  // Riemann weights (time_step * freq_step) cancel in the ratio.
  return inside / total;
}

}  // namespace fce

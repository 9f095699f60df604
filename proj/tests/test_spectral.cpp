#include "fce/activations.hpp"
#include "fce/errors.hpp"
#include "fce/spectral.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace fce;
using oracle::kPi;

namespace {

SampledSignal tone(double hz, double rate, double seconds, double amp = 1.0) {
  const auto n = static_cast<std::size_t>(std::llround(rate * seconds));
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = amp * std::cos(2 * kPi * hz * i / rate);
  return SampledSignal(std::move(x), rate);
}

SampledSignal random_signal(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<double> x(n);
  for (double& v : x) v = g(gen);
  return SampledSignal(std::move(x), 100.0);
}

// |V|^2 of one frame by direct summation with an independently built window.
double frame_power(const std::vector<double>& x, std::size_t center, std::size_t window,
                   std::size_t fft_length, std::size_t bin) {
  const double sigma = window / 8.0;
  const long half = static_cast<long>(window / 2);
  cplx acc = 0.0;
  double wsum = 0.0;
  for (long j = 0; j < static_cast<long>(window); ++j) {
    const double w = std::exp(-0.5 * std::pow((j - half) / sigma, 2));
    wsum += w;
    const long idx = static_cast<long>(center) - half + j;
    if (idx < 0 || idx >= static_cast<long>(x.size())) continue;
    acc += x[idx] * w * std::polar(1.0, -2 * kPi * double(bin) * double(j) / double(fft_length));
  }
  return std::norm(acc) * std::pow(2.0 / wsum, 2);
}

std::size_t argmax_bin(const Spectrogram& s, std::size_t frame) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < s.bins; ++k) {
    if (s.at(frame, k) > s.at(frame, best)) best = k;
  }
  return best;
}

}  // namespace

TEST_CASE("dft examples") {
  const Spectrum s = dft(tone(1.0, 512.0, 1.0));
  CHECK(s.bins.size() == 257);
  CHECK(s.bin_width == 1.0);
  CHECK(std::abs(std::abs(s.bins[1]) - 1.0) < 1e-12);
  for (std::size_t l = 0; l < s.bins.size(); ++l) {
    if (l != 1) CHECK(std::abs(s.bins[l]) < 1e-12);
  }

  std::vector<double> x(512);
  for (int i = 0; i < 512; ++i) {
    const double t = i / 512.0;
    x[i] = 0.8 * std::cos(2 * kPi * 6 * t) + 1.4 * std::cos(2 * kPi * 9 * t) +
           0.9 * std::cos(2 * kPi * 33 * t);
  }
  const Spectrum f = dft(SampledSignal(x, 512.0));
  CHECK(std::abs(f.bins[6]) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(std::abs(f.bins[9]) == doctest::Approx(1.4).epsilon(1e-12));
  CHECK(std::abs(f.bins[33]) == doctest::Approx(0.9).epsilon(1e-12));

  const Spectrum c = dft(SampledSignal(std::vector<double>(64, 1.0), 64.0));
  CHECK(c.bins[0] == cplx(1.0, 0.0));
  for (std::size_t l = 1; l < c.bins.size(); ++l) CHECK(std::abs(c.bins[l]) < 1e-14);

  CHECK(dft(SampledSignal({1.0, 2.0, 3.0}, 1.0)).bins.size() == 2);
}

TEST_CASE("dft matches the direct DFT oracle") {
  std::mt19937_64 gen(9);
  for (std::size_t n : {2u, 3u, 7u, 64u, 100u, 257u, 1000u, 2048u}) {
    const SampledSignal x = random_signal(gen, n);
    const auto want = oracle::direct_dft(x.samples());
    const auto got = dft(x).bins;
    REQUIRE(got.size() == want.size());
    for (std::size_t l = 0; l < got.size(); ++l) CHECK(std::abs(got[l] - want[l]) < 1e-9);
    // rectified path too
    const SampledSignal r = apply(ActivationSpec::abs(), x);
    std::vector<double> ab(x.samples());
    for (double& v : ab) v = std::abs(v);
    const auto want_abs = oracle::direct_dft(ab);
    const auto got_abs = dft(r).bins;
    for (std::size_t l = 0; l < got_abs.size(); ++l) {
      CHECK(std::abs(got_abs[l] - want_abs[l]) < 1e-9);
    }
  }
}

TEST_CASE("Parseval") {
  std::mt19937_64 gen(2);
  std::uniform_int_distribution<std::size_t> len(2, 3000);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = len(gen);
    const SampledSignal x = random_signal(gen, n);
    double energy = 0.0;
    for (double v : x.samples()) energy += v * v;
    energy /= static_cast<double>(n);
    const auto bins = dft(x).bins;
    double rhs = std::norm(bins[0]);
    for (std::size_t l = 1; l < bins.size(); ++l) {
      const bool nyquist = n % 2 == 0 && l == n / 2;
      rhs += std::norm(bins[l]) * (nyquist ? 0.25 : 0.5);
    }
    CHECK(rhs == doctest::Approx(energy).epsilon(1e-10));
  }
}

TEST_CASE("fundamental_energy_ratio examples") {
  CHECK(fundamental_energy_ratio(dft(tone(1.0, 512.0, 1.0))) == doctest::Approx(1.0));
  CHECK(fundamental_energy_ratio(dft(tone(2.0, 512.0, 1.0))) < 1e-25);

  const SampledSignal rect = apply(ActivationSpec::abs(), tone(1.0, 512.0, 1.0));
  const Spectrum s = dft(rect);
  CHECK(fundamental_energy_ratio(s, 1) < 1e-20);
  const double r2 = fundamental_energy_ratio(s, 2);
  CHECK(r2 > 0.9);
  // closed form: |cos| has coefficients 4 / (pi (4k^2 - 1)) at 2k
  double denom = 0.0;
  for (int k = 1; k <= 128; ++k) denom += std::pow(1.0 / (4.0 * k * k - 1.0), 2);
  CHECK(r2 == doctest::Approx((1.0 / 9.0) / denom).epsilon(1e-3));
}

TEST_CASE("fundamental_energy_ratio errors and scale invariance") {
  const Spectrum s = dft(tone(3.0, 64.0, 1.0));
  CHECK_THROWS_AS(fundamental_energy_ratio(s, 1, 33), PreconditionViolation);
  CHECK_THROWS_AS(fundamental_energy_ratio(s, 5, 4), PreconditionViolation);
  CHECK_THROWS_AS(fundamental_energy_ratio(s, 0, 4), PreconditionViolation);
  CHECK_THROWS_AS(fundamental_energy_ratio(dft(SampledSignal(std::vector<double>(64, 2.0), 64.0)),
                                           1, 32),
                  ZeroDenominator);

  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 20; ++trial) {
    const SampledSignal x = random_signal(gen, 512);
    std::vector<double> y(x.samples());
    const double c = trial % 2 ? -3.7 : 1e-3;
    for (double& v : y) v *= c;
    CHECK(fundamental_energy_ratio(dft(SampledSignal(y, 100.0))) ==
          doctest::Approx(fundamental_energy_ratio(dft(x))).epsilon(1e-12));
  }
}

TEST_CASE("stft locates a pure tone") {
  const SampledSignal x = tone(50.0, 512.0, 10.0);
  const StftOptions o = default_stft_options(512.0);
  CHECK(o.window_length == 1024);
  CHECK(o.hop == 51);
  CHECK(o.fft_length == 8192);
  const Spectrogram s = stft(x, o);
  CHECK(s.frames == (x.size() - 1) / o.hop + 1);
  CHECK(s.bins == o.fft_length / 2 + 1);
  const auto nearest = static_cast<std::size_t>(std::llround(50.0 / s.freq_step));
  const std::size_t margin = o.window_length / 2 / o.hop + 1;
  for (std::size_t f = margin; f + margin < s.frames; ++f) CHECK(argmax_bin(s, f) == nearest);
  // interior frames peak near 1 for a unit cosine
  CHECK(s.at(s.frames / 2, nearest) == doctest::Approx(1.0).epsilon(0.01));
  for (double v : s.matrix) CHECK(v >= 0.0);

  // per-frame direct oracle
  for (std::size_t f : {std::size_t{0}, std::size_t{3}, s.frames / 2, s.frames - 1}) {
    for (std::size_t k : {std::size_t{0}, nearest - 3, nearest, nearest + 1, std::size_t{700}}) {
      const double want = frame_power(x.samples(), f * o.hop, o.window_length, o.fft_length, k);
      CHECK(std::abs(s.at(f, k) - want) < 1e-9);
    }
  }
}

TEST_CASE("stft of zero signal and short signal") {
  const Spectrogram z = stft(SampledSignal(std::vector<double>(400, 0.0), 100.0), 200, 10, 256);
  CHECK(std::all_of(z.matrix.begin(), z.matrix.end(), [](double v) { return v == 0.0; }));
  CHECK_THROWS_AS(stft(SampledSignal(std::vector<double>(100, 1.0), 100.0), 200, 10, 256),
                  SignalTooShort);
  CHECK_THROWS_AS(stft(SampledSignal(std::vector<double>(400, 1.0), 100.0), 200, 0, 256),
                  PreconditionViolation);
  CHECK_THROWS_AS(stft(SampledSignal(std::vector<double>(400, 1.0), 100.0), 200, 10, 128),
                  PreconditionViolation);
}

TEST_CASE("stft follows a chirp") {
  const double rate = 128.0;
  std::vector<double> x(static_cast<std::size_t>(rate * 20));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = i / rate;
    x[i] = std::cos(2 * kPi * (t + 0.5 * t * t));
  }
  const Spectrogram s = stft(SampledSignal(x, rate), default_stft_options(rate));
  const std::size_t margin = 10;
  double previous = -1.0;
  std::vector<double> times, freqs;
  for (std::size_t f = margin; f + margin < s.frames; ++f) {
    const double hz = s.frequency(argmax_bin(s, f));
    CHECK(hz >= previous);
    previous = hz;
    times.push_back(f * s.time_step);
    freqs.push_back(hz);
  }
  // slope of the ridge is the chirp rate 1 Hz/s
  const double mt = std::accumulate(times.begin(), times.end(), 0.0) / times.size();
  const double mf = std::accumulate(freqs.begin(), freqs.end(), 0.0) / freqs.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    num += (times[i] - mt) * (freqs[i] - mf);
    den += (times[i] - mt) * (times[i] - mt);
  }
  CHECK(num / den == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("stft is shift covariant") {
  std::mt19937_64 gen(8);
  const SampledSignal x = random_signal(gen, 3000);
  const std::size_t hop = 25, window = 200, shift = 4;
  std::vector<double> y(x.samples().begin() + shift * hop, x.samples().end());
  const Spectrogram a = stft(x, window, hop, 256);
  const Spectrogram b = stft(SampledSignal(y, 100.0), window, hop, 256);
  const std::size_t margin = window / 2 / hop + 1;
  for (std::size_t f = margin; f + margin + shift < b.frames; ++f) {
    for (std::size_t k = 0; k < a.bins; ++k) {
      CHECK(std::abs(b.at(f, k) - a.at(f + shift, k)) <= 1e-6 * (1.0 + a.at(f + shift, k)));
    }
  }
}

TEST_CASE("stft does not depend on the thread count") {
  std::mt19937_64 gen(12);
  const SampledSignal x = random_signal(gen, 5000);
  setenv("FCE_THREADS", "1", 1);
  const Spectrogram a = stft(x, 256, 7, 512);
  setenv("FCE_THREADS", "4", 1);
  const Spectrogram b = stft(x, 256, 7, 512);
  unsetenv("FCE_THREADS");
  CHECK(a.matrix == b.matrix);
}

TEST_CASE("percentile and dynamic_range_clip") {
  Spectrogram s;
  s.frames = 100;
  s.bins = 100;
  s.matrix.resize(10000);
  std::iota(s.matrix.begin(), s.matrix.end(), 0.0);
  CHECK(percentile(s.matrix, 50.0) == 4999.5);
  const Spectrogram c = dynamic_range_clip(s, 0.0, 50.0);
  CHECK(*std::max_element(c.matrix.begin(), c.matrix.end()) == 4999.5);
  CHECK(c.matrix[0] == 0.0);

  Spectrogram flat = s;
  std::fill(flat.matrix.begin(), flat.matrix.end(), 3.25);
  CHECK(dynamic_range_clip(flat).matrix == flat.matrix);

  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  Spectrogram r = s;
  for (double& v : r.matrix) v = u(gen);
  CHECK(dynamic_range_clip(r, 0.0, 100.0).matrix == r.matrix);

  // idempotent where the percentiles land on order statistics
  Spectrogram odd = r;
  odd.matrix.resize(10001);
  odd.frames = 1;
  odd.bins = 10001;
  odd.matrix.back() = 5.0;
  const Spectrogram half_clip = dynamic_range_clip(odd, 10.0, 90.0);
  CHECK(dynamic_range_clip(half_clip, 10.0, 90.0).matrix == half_clip.matrix);

  CHECK_THROWS_AS(dynamic_range_clip(r, 50.0, 50.0), PreconditionViolation);
  CHECK_THROWS_AS(dynamic_range_clip(r, -1.0, 50.0), PreconditionViolation);
  CHECK_THROWS_AS(dynamic_range_clip(r, 0.0, 100.5), PreconditionViolation);
}

TEST_CASE("band_energy_ratio around a 2 Hz tone") {
  const double rate = 32.0;
  const SampledSignal x = tone(2.0, rate, 60.0);
  // a 10 s window: frequency spread of the Gaussian well inside +-0.2 Hz
  const Spectrogram s = stft(x, 10 * 32, 16, 1024);
  const std::vector<double> on(s.frames, 2.0);
  const std::vector<double> off(s.frames, 4.0);
  CHECK(band_energy_ratio(s, on) > 0.95);
  CHECK(band_energy_ratio(s, off) < 0.05);

  // with the default 2 s window the +-0.2 Hz band holds only part of the energy
  const Spectrogram d = stft(x, default_stft_options(rate));
  const double r = band_energy_ratio(d, std::vector<double>(d.frames, 2.0));
  CHECK(r > 0.2);
  CHECK(r < 0.6);

  const Spectrogram z = stft(SampledSignal(std::vector<double>(640, 0.0), rate), 320, 16, 1024);
  CHECK_THROWS_AS(band_energy_ratio(z, std::vector<double>(z.frames, 2.0)), ZeroDenominator);
  CHECK_THROWS_AS(band_energy_ratio(s, std::vector<double>(3, 2.0)), PreconditionViolation);
  CHECK_THROWS_AS(band_energy_ratio(s, on, 0.0), PreconditionViolation);
  CHECK_THROWS_AS(band_energy_ratio(s, std::vector<double>(s.frames, 40.0)), EmptyBand);
  const double ratio = band_energy_ratio(s, std::vector<double>(s.frames, 3.0), 1.5);
  CHECK(ratio >= 0.0);
  CHECK(ratio <= 1.0);
}

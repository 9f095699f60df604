#pragma once

#include "fce/signal_model.hpp"
#include "fce/spectral.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fce::io {

// Every double written to CSV goes through this: %.17g, which round-trips.
std::string format_double(double x);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

// Signal CSV:
//   sample_rate,<value>
//   <sample 0>
//   <sample 1>
//   ...
// Blank lines are ignored. Malformed lines raise InputFormatError naming the
// 1-based line number.
SampledSignal parse_signal_csv(std::string_view text);
std::string format_signal_csv(const SampledSignal& signal);

// RIFF/WAVE, PCM 16/24/32-bit integer, any channel count (channel 0 is used).
// Samples are divided by the full scale 2^(bits-1).
SampledSignal parse_wav(std::string_view bytes);
// 16-bit mono PCM writer, used for fixtures.
std::string format_wav16(const std::vector<double>& samples, int sample_rate);

// Dispatch on the leading bytes: "RIFF" -> WAV, otherwise CSV.
SampledSignal read_signal(const std::filesystem::path& path);

// One instantaneous-frequency value (Hz) per line.
std::vector<double> parse_if_curve(std::string_view text);

// "bin,frequency_hz,re,im,magnitude" then one row per bin.
std::string format_spectrum_csv(const Spectrum& spectrum);

// Header "time_s,<f_0>,<f_1>,...", then one row per frame: center time
// followed by the frame's |V|^2 values.
std::string format_spectrogram_csv(const Spectrogram& spectrogram);

// Binary PGM (P5), width = frames, height = bins, highest frequency in the
// first row. Pixel = floor(255 (x - lo) / (hi - lo) + 0.5) with lo/hi the
// matrix min/max; all zero when hi == lo. Apply dynamic_range_clip first.
std::string format_spectrogram_pgm(const Spectrogram& spectrogram);

// JSON polynomial description, either a bare term array
//   [{"m": 1, "re": 1.0, "im": 0.0}, ...]     ("a" is accepted for "re")
// or an object
//   {"form": "complex"|"real_cosine", "period": 6.283..., "terms": [...]}.
TrigPolynomial parse_polynomial_json(std::string_view text);

}  // namespace fce::io

#include "fce/io.hpp"

#include "fce/errors.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

namespace fce::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_number(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::uint32_t read_le(std::string_view bytes, std::size_t offset, int width) {
  std::uint32_t v = 0;
  for (int i = 0; i < width; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
  }
  return v;
}

void append_le(std::string& out, std::uint32_t v, int width) {
  for (int i = 0; i < width; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputFormatError("cannot open '" + path.string() + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputFormatError("cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

SampledSignal parse_signal_csv(std::string_view text) {
  const auto lines = split_lines(text);
  double rate = 0.0;
  bool have_header = false;
  std::vector<double> samples;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(i + 1);
    if (!have_header) {
      const auto comma = line.find(',');
      if (comma == std::string_view::npos || trim(line.substr(0, comma)) != "sample_rate" ||
          !parse_number(line.substr(comma + 1), rate) || !(rate > 0.0)) {
        throw InputFormatError(where + ": expected header 'sample_rate,<positive value>'");
      }
      have_header = true;
      continue;
    }
    double v = 0.0;
    if (!parse_number(line, v)) {
      throw InputFormatError(where + ": malformed sample '" + std::string(line) + "'");
    }
    samples.push_back(v);
  }
  if (!have_header) throw InputFormatError("signal CSV: missing 'sample_rate,<value>' header");
  if (samples.size() < 2) throw InputFormatError("signal CSV: need at least 2 samples");
  return SampledSignal(std::move(samples), rate);
}

std::string format_signal_csv(const SampledSignal& signal) {
  std::string out = "sample_rate," + format_double(signal.sample_rate()) + "\n";
  for (double x : signal.samples()) {
    out += format_double(x);
    out += '\n';
  }
  return out;
}

SampledSignal parse_wav(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE") {
    throw InputFormatError("WAV: missing RIFF/WAVE header");
  }
  int channels = 0;
  int bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::string_view data;
  bool have_data = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string_view id = bytes.substr(pos, 4);
    const std::uint32_t size = read_le(bytes, pos + 4, 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) throw InputFormatError("WAV: truncated chunk");
    if (id == "fmt ") {
      if (size < 16) throw InputFormatError("WAV: fmt chunk too short");
      std::uint32_t format = read_le(bytes, body, 2);
      channels = static_cast<int>(read_le(bytes, body + 2, 2));
      rate = read_le(bytes, body + 4, 4);
      bits = static_cast<int>(read_le(bytes, body + 14, 2));
      if (format == 0xFFFE && size >= 26) format = read_le(bytes, body + 24, 2);
      if (format != 1) throw InputFormatError("WAV: only integer PCM is supported");
      have_fmt = true;
    } else if (id == "data") {
      data = bytes.substr(body, size);
      have_data = true;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt || !have_data) throw InputFormatError("WAV: missing fmt or data chunk");
  if (bits != 16 && bits != 24 && bits != 32) {
    throw InputFormatError("WAV: unsupported bit depth " + std::to_string(bits));
  }
  if (channels < 1 || rate == 0) throw InputFormatError("WAV: bad channel count or sample rate");
  const int width = bits / 8;
  const std::size_t frame = static_cast<std::size_t>(width) * channels;
  const double full_scale = std::ldexp(1.0, bits - 1);
  std::vector<double> samples;
  for (std::size_t off = 0; off + frame <= data.size(); off += frame) {
    std::uint32_t raw = read_le(data, off, width);
    // Sign-extend to 32 bits.
    const int shift = 32 - bits;
    const auto value = static_cast<std::int32_t>(raw << shift) >> shift;
    samples.push_back(static_cast<double>(value) / full_scale);
  }
  if (samples.size() < 2) throw InputFormatError("WAV: need at least 2 samples");
  return SampledSignal(std::move(samples), static_cast<double>(rate));
}

std::string format_wav16(const std::vector<double>& samples, int sample_rate) {
  std::string out = "RIFF";
  const auto data_size = static_cast<std::uint32_t>(samples.size() * 2);
  append_le(out, 36 + data_size, 4);
  out += "WAVEfmt ";
  append_le(out, 16, 4);
  append_le(out, 1, 2);  // PCM
  append_le(out, 1, 2);  // mono
  append_le(out, static_cast<std::uint32_t>(sample_rate), 4);
  append_le(out, static_cast<std::uint32_t>(sample_rate) * 2, 4);
  append_le(out, 2, 2);
  append_le(out, 16, 2);
  out += "data";
  append_le(out, data_size, 4);
  for (double x : samples) {
    const long v = std::lround(std::clamp(x, -1.0, 32767.0 / 32768.0) * 32768.0);
    append_le(out, static_cast<std::uint32_t>(static_cast<std::int16_t>(v)) & 0xffffu, 2);
  }
  return out;
}

SampledSignal read_signal(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.rfind("RIFF", 0) == 0) return parse_wav(bytes);
  return parse_signal_csv(bytes);
}

std::vector<double> parse_if_curve(std::string_view text) {
  std::vector<double> out;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    double v = 0.0;
    if (!parse_number(line, v)) {
      throw InputFormatError("IF curve line " + std::to_string(i + 1) + ": malformed value");
    }
    out.push_back(v);
  }
  return out;
}

std::string format_spectrum_csv(const Spectrum& spectrum) {
  std::string out = "bin,frequency_hz,re,im,magnitude\n";
  for (std::size_t k = 0; k < spectrum.bins.size(); ++k) {
    const cplx c = spectrum.bins[k];
    out += std::to_string(k) + ',' + format_double(k * spectrum.bin_width) + ',' +
           format_double(c.real()) + ',' + format_double(c.imag()) + ',' +
           format_double(std::abs(c)) + '\n';
  }
  return out;
}

std::string format_spectrogram_csv(const Spectrogram& spectrogram) {
  std::string out = "time_s";
  for (std::size_t k = 0; k < spectrogram.bins; ++k) {
    out += ',' + format_double(spectrogram.frequency(k));
  }
  out += '\n';
  for (std::size_t f = 0; f < spectrogram.frames; ++f) {
    out += format_double(f * spectrogram.time_step);
    for (std::size_t k = 0; k < spectrogram.bins; ++k) {
      out += ',' + format_double(spectrogram.at(f, k));
    }
    out += '\n';
  }
  return out;
}

std::string format_spectrogram_pgm(const Spectrogram& spectrogram) {
  std::string out = "P5\n" + std::to_string(spectrogram.frames) + ' ' +
                    std::to_string(spectrogram.bins) + "\n255\n";
  double lo = 0.0;
  double hi = 0.0;
  if (!spectrogram.matrix.empty()) {
    const auto [mn, mx] = std::minmax_element(spectrogram.matrix.begin(), spectrogram.matrix.end());
    lo = *mn;
    hi = *mx;
  }
  for (std::size_t row = 0; row < spectrogram.bins; ++row) {
    const std::size_t k = spectrogram.bins - 1 - row;
    for (std::size_t f = 0; f < spectrogram.frames; ++f) {
      int pixel = 0;
      if (hi > lo) {
        pixel = static_cast<int>(std::floor(255.0 * (spectrogram.at(f, k) - lo) / (hi - lo) + 0.5));
        pixel = std::clamp(pixel, 0, 255);
      }
      out.push_back(static_cast<char>(pixel));
    }
  }
  return out;
}

TrigPolynomial parse_polynomial_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputFormatError(std::string("polynomial JSON: ") + e.what());
  }
  Form form = Form::Complex;
  double period = 2.0 * std::numbers::pi;
  const nlohmann::json* terms = &doc;
  if (doc.is_object()) {
    if (doc.contains("form")) {
      const auto name = doc["form"].get<std::string>();
      if (name == "real_cosine") {
        form = Form::RealCosine;
      } else if (name != "complex") {
        throw InputFormatError("polynomial JSON: form must be 'complex' or 'real_cosine'");
      }
    }
    if (doc.contains("period")) period = doc["period"].get<double>();
    if (!doc.contains("terms")) throw InputFormatError("polynomial JSON: missing 'terms'");
    terms = &doc["terms"];
  }
  if (!terms->is_array()) throw InputFormatError("polynomial JSON: terms must be an array");
  std::vector<Term> out;
  try {
    for (const auto& t : *terms) {
      if (!t.contains("m")) throw InputFormatError("polynomial JSON: term without 'm'");
      Term term;
      term.frequency = t["m"].get<int>();
      double re = t.value("re", t.value("a", 0.0));
      double im = t.value("im", 0.0);
      term.amplitude = {re, im};
      out.push_back(term);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputFormatError(std::string("polynomial JSON: ") + e.what());
  }
  return TrigPolynomial(std::move(out), period, form);
}

}  // namespace fce::io

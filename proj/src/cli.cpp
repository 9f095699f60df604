#include "fce/cli.hpp"

#include "fce/activations.hpp"
#include "fce/errors.hpp"
#include "fce/experiments.hpp"
#include "fce/io.hpp"
#include "fce/signal_model.hpp"
#include "fce/spectral.hpp"
#include "fce/sumset.hpp"
#include "fce/theory.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>

namespace fce::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct AnalyzeOptions {
  std::string input;
  std::string activation{"abs"};
  double epsilon{0.1};
  std::size_t window{0};
  std::size_t hop{0};
  std::size_t fft_length{0};
  std::vector<std::string> exports{"csv", "pgm", "json"};
  std::string if_curve;
  double half_width{0.2};
  std::optional<double> band_floor;
  std::optional<double> band_ceiling;
  double lo_pct{0.0};
  double hi_pct{99.95};
  int fundamental_bin{1};
  int max_bin{0};
  double support_threshold{1e-2};
  bool remove_mean{false};
  std::string out_dir{"."};
};

struct VerifyOptions {
  std::string signal;
  std::vector<double> ladder{1e-2, 1e-3, 1e-4, 1e-5};
  double slope_limit{0.3};
  std::string out_dir;
};

struct BenchOptions {
  std::size_t trials{10000};
  std::uint64_t seed{0};
  std::vector<std::string> activations{"abs", "relu", "h0.2", "h0.1", "h0.05"};
  std::string out_dir;
  unsigned threads{0};
};

struct SumsetOptions {
  std::vector<int> freqs;
  int k_max{50};
  int range{0};
};

Json manifest(const std::string& subcommand, Json config, const std::string& digest) {
  Json m;
  m["subcommand"] = subcommand;
  m["config"] = std::move(config);
  m["input_digest"] = digest;
  m["tool_version"] = kToolVersion;
  return m;
}

void write_json(const fs::path& path, const Json& doc) { io::write_file(path, doc.dump(2) + "\n"); }

Json json_optional(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

SampledSignal centered(const SampledSignal& signal) {
  std::vector<double> x = signal.samples();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  for (double& v : x) v -= mean;
  return SampledSignal(std::move(x), signal.sample_rate(), signal.start_time());
}

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out) {
  const std::string raw = io::read_file(o.input);
  SampledSignal signal = raw.rfind("RIFF", 0) == 0 ? io::parse_wav(raw) : io::parse_signal_csv(raw);
  if (o.remove_mean) signal = centered(signal);

  std::optional<ActivationSpec> spec;
  if (o.activation == "abs") {
    spec = ActivationSpec::abs();
  } else if (o.activation == "relu") {
    spec = ActivationSpec::relu();
  } else if (o.activation == "heps") {
    spec = ActivationSpec::adaptive_reciprocal(o.epsilon);
  }
  const SampledSignal activated = spec ? apply(*spec, signal) : signal;

  StftOptions so = default_stft_options(signal.sample_rate());
  if (o.window > 0) so.window_length = o.window;
  if (o.hop > 0) so.hop = o.hop;
  if (o.fft_length > 0) so.fft_length = o.fft_length;
  so.fft_length = std::max(so.fft_length, so.window_length);
  if (so.window_length > signal.size()) {
    throw SignalTooShort("analyze: signal has " + std::to_string(signal.size()) +
                         " samples, shorter than the " + std::to_string(so.window_length) +
                         "-sample window (use --window)");
  }

  const Spectrum before = dft(signal);
  const Spectrum after = dft(activated);
  const int highest = static_cast<int>(after.bins.size()) - 1;
  const int max_bin = o.max_bin > 0 ? o.max_bin : std::min(256, highest);
  // Activated signals carry a large mean whose window leakage would swamp the
  // low bins, so the spectrogram is taken of the centered signal.
  const Spectrogram spectrogram = stft(centered(activated), so);
  const Spectrogram clipped = dynamic_range_clip(spectrogram, o.lo_pct, o.hi_pct);

  const auto strongest = [](const Spectrum& sp, int lo, int hi) {
    int best = lo;
    for (int k = lo; k <= hi; ++k) {
      if (std::abs(sp.bins[k]) > std::abs(sp.bins[best])) best = k;
    }
    return best;
  };
  const int dominant = strongest(after, 1, max_bin);
  const std::span<const cplx> input_bins(before.bins.data(), static_cast<std::size_t>(max_bin) + 1);
  const std::span<const cplx> output_bins(after.bins.data(), static_cast<std::size_t>(max_bin) + 1);
  // Lowest bin the input occupies; below it only the activation creates energy.
  int lowest_input = 0;
  {
    double peak = 0.0;
    for (int k = 1; k <= max_bin; ++k) peak = std::max(peak, std::abs(input_bins[k]));
    for (int k = 1; k <= max_bin && lowest_input == 0; ++k) {
      if (peak > 0.0 && std::abs(input_bins[k]) > o.support_threshold * peak) lowest_input = k;
    }
  }
  const double floor_hz = o.band_floor.value_or(1.0 / spectrogram.duration);
  const double ceiling_hz = o.band_ceiling.value_or(spectrogram.nyquist());
  std::vector<double> ridge;
  for (std::size_t f = 0; f < spectrogram.frames; ++f) {
    std::size_t best = spectrogram.bins;
    for (std::size_t k = 0; k < spectrogram.bins; ++k) {
      const double xi = spectrogram.frequency(k);
      if (xi < floor_hz || xi > ceiling_hz) continue;
      if (best == spectrogram.bins || spectrogram.at(f, k) > spectrogram.at(f, best)) best = k;
    }
    if (best < spectrogram.bins && spectrogram.at(f, best) > 0.0) {
      ridge.push_back(spectrogram.frequency(best));
    }
  }

  Json report;
  report["activation"] = spec ? spec->name() : std::string("none");
  report["samples"] = signal.size();
  report["sample_rate"] = signal.sample_rate();
  report["fundamental_bin"] = o.fundamental_bin;
  report["max_bin"] = max_bin;
  report["fundamental_energy_ratio_before"] =
      fundamental_energy_ratio(before, o.fundamental_bin, max_bin);
  report["fundamental_energy_ratio"] = fundamental_energy_ratio(after, o.fundamental_bin, max_bin);
  report["bin_width_hz"] = after.bin_width;
  report["dominant_bin"] = dominant;
  report["dominant_hz"] = dominant * after.bin_width;
  const int low = lowest_input > 1 ? strongest(after, 1, lowest_input - 1) : 0;
  if (low > 0 && std::abs(after.bins[low]) > o.support_threshold * std::abs(after.bins[dominant])) {
    report["dominant_low_bin"] = low;
    report["dominant_low_hz"] = low * after.bin_width;
  } else {
    report["dominant_low_bin"] = nullptr;
    report["dominant_low_hz"] = nullptr;
  }
  report["support_threshold"] = o.support_threshold;
  report["input_support_gcd"] = support_gcd_relative(input_bins, o.support_threshold);
  const int gcd_bins = support_gcd_relative(output_bins, o.support_threshold);
  report["support_gcd"] = gcd_bins;
  report["support_gcd_hz"] = gcd_bins * after.bin_width;
  report["median_ridge_hz"] = ridge.empty() ? Json(nullptr) : Json(median(ridge));
  Json sg;
  sg["frames"] = spectrogram.frames;
  sg["bins"] = spectrogram.bins;
  sg["time_step_s"] = spectrogram.time_step;
  sg["freq_step_hz"] = spectrogram.freq_step;
  sg["window"] = spectrogram.window_descriptor;
  sg["clip_percentiles"] = {o.lo_pct, o.hi_pct};
  sg["clip_values"] = {percentile(spectrogram.matrix, o.lo_pct),
                       percentile(spectrogram.matrix, o.hi_pct)};
  report["spectrogram"] = sg;
  if (!o.if_curve.empty()) {
    const auto curve = io::parse_if_curve(io::read_file(o.if_curve));
    report["band_energy_ratio"] = band_energy_ratio(spectrogram, curve, o.half_width,
                                                    floor_hz, ceiling_hz);
    report["band"] = {{"half_width_hz", o.half_width}, {"floor_hz", floor_hz},
                      {"ceiling_hz", ceiling_hz}};
  }

  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  io::write_file(dir / "activated.csv", io::format_signal_csv(activated));
  io::write_file(dir / "spectrum.csv", io::format_spectrum_csv(after));
  const auto wants = [&](const char* fmt) {
    return std::find(o.exports.begin(), o.exports.end(), fmt) != o.exports.end();
  };
  if (wants("csv")) io::write_file(dir / "spectrogram.csv", io::format_spectrogram_csv(clipped));
  if (wants("pgm")) io::write_file(dir / "spectrogram.pgm", io::format_spectrogram_pgm(clipped));
  if (wants("json")) write_json(dir / "report.json", report);

  Json config;
  config["activation"] = o.activation;
  config["epsilon"] = o.epsilon;
  config["window"] = so.window_length;
  config["hop"] = so.hop;
  config["fft_length"] = so.fft_length;
  config["export"] = o.exports;
  config["if_curve"] = o.if_curve;
  config["if_curve_digest"] = o.if_curve.empty() ? "" : io::sha256_hex(io::read_file(o.if_curve));
  config["half_width"] = o.half_width;
  config["band_floor"] = json_optional(o.band_floor);
  config["band_ceiling"] = json_optional(o.band_ceiling);
  config["lo_pct"] = o.lo_pct;
  config["hi_pct"] = o.hi_pct;
  config["fundamental_bin"] = o.fundamental_bin;
  config["max_bin"] = max_bin;
  config["support_threshold"] = o.support_threshold;
  config["remove_mean"] = o.remove_mean;
  write_json(dir / "manifest.json", manifest("analyze", config, io::sha256_hex(raw)));

  out << report.dump(2) << "\n";
  return kOk;
}

int cmd_verify_theorem(const VerifyOptions& o, std::ostream& out) {
  const std::string raw = io::read_file(o.signal);
  const TrigPolynomial poly = io::parse_polynomial_json(raw);
  PeakSet peaks;
  try {
    peaks = find_global_maxima(poly);
  } catch (const ConstantModulus& e) {
    throw ConstantModulus(std::string(e.what()) +
                          "; the asymptotic check needs |f| to peak at isolated points, so use "
                          "at least two frequencies");
  } catch (const DegenerateMaximum& e) {
    throw DegenerateMaximum(std::string(e.what()) +
                            "; the asymptotic check needs non-degenerate maxima (g'' < 0)");
  }
  const ScalingVerification result = scaling_verification(poly, o.ladder, o.slope_limit);

  std::ostringstream lines;
  for (const AsymptoticReport& r : result.reports) {
    Json j;
    j["type"] = "report";
    j["epsilon"] = r.epsilon;
    j["numeric_integral"] = {r.numeric_integral.real(), r.numeric_integral.imag()};
    j["prediction"] = {r.prediction.real(), r.prediction.imag()};
    j["abs_error"] = r.abs_error;
    j["rel_error"] = json_optional(r.rel_error);
    j["scaled_response"] = std::abs(r.numeric_integral) * std::sqrt(r.epsilon);
    j["quadrature_error"] = r.quadrature_error;
    lines << j.dump() << "\n";
  }
  Json summary;
  summary["type"] = "summary";
  summary["sup_norm"] = peaks.sup_norm;
  Json pk = Json::array();
  for (const Peak& p : peaks.peaks) {
    pk.push_back({{"t", p.location}, {"g", p.value}, {"g2", p.second_derivative}});
  }
  summary["peaks"] = pk;
  summary["prediction_cancels"] = result.cancellation;
  summary["slope"] = result.slope;
  summary["slope_limit"] = result.slope_limit;
  summary["passed"] = result.passed;
  lines << summary.dump() << "\n";
  out << lines.str();

  if (!o.out_dir.empty()) {
    const fs::path dir(o.out_dir);
    fs::create_directories(dir);
    io::write_file(dir / "report.jsonl", lines.str());
    Json config;
    config["eps_ladder"] = o.ladder;
    config["slope_limit"] = o.slope_limit;
    write_json(dir / "manifest.json", manifest("verify-theorem", config, io::sha256_hex(raw)));
  }
  return result.passed ? kOk : kNumericalError;
}

int cmd_synth_bench(const BenchOptions& o, std::ostream& out) {
  SynthConfig config;
  config.trials = o.trials;
  config.master_seed = o.seed;
  for (const auto& a : o.activations) config.activations.push_back(ActivationSpec::parse(a));
  const TrialStats stats = run_trials(config, o.threads);

  Json echo;
  echo["sample_rate"] = config.sample_rate;
  echo["k_min"] = config.k_min;
  echo["k_max"] = config.k_max;
  echo["freq_min"] = config.freq_min;
  echo["freq_max"] = config.freq_max;
  echo["density_scale"] = config.density_scale;
  echo["max_bin"] = config.max_bin;
  echo["trials"] = config.trials;
  echo["master_seed"] = config.master_seed;
  echo["activations"] = o.activations;

  Json summary;
  summary["config"] = echo;
  summary["rng"] = stats.rng_algorithm;
  summary["trials_run"] = stats.trials_run;
  Json per = Json::array();
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  char line[96];
  std::snprintf(line, sizeof line, "%-10s %12s %12s\n", "activation", "median_%", "mad_%");
  out << line;
  for (const ActivationStats& s : stats.per_activation) {
    per.push_back({{"activation", s.activation}, {"median", s.median}, {"mad", s.mad}});
    std::string csv = "lower_edge,upper_edge,count\n";
    for (std::size_t i = 0; i < s.histogram.counts.size(); ++i) {
      csv += io::format_double(s.histogram.edges[i]) + ',' +
             io::format_double(s.histogram.edges[i + 1]) + ',' +
             std::to_string(s.histogram.counts[i]) + '\n';
    }
    io::write_file(dir / ("histogram_" + s.activation + ".csv"), csv);
    std::snprintf(line, sizeof line, "%-10s %12.6f %12.6f\n", s.activation.c_str(),
                  100.0 * s.median, 100.0 * s.mad);
    out << line;
  }
  summary["activations"] = per;
  write_json(dir / "summary.json", summary);
  write_json(dir / "manifest.json", manifest("synth-bench", echo, ""));
  return kOk;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

int cmd_sumset(const SumsetOptions& o, std::ostream& out) {
  const FrequencySet m(o.freqs);
  const int range = o.range > 0 ? o.range : 10 * m.max();
  const SumsetLimit limit = sumset_gcd_limit(m, o.k_max, range);
  out << "M = {" << join(m.elements()) << "}, range [0, " << range << "], k_max " << o.k_max
      << "\n";
  out << "gcd " << limit.gcd << "\n";
  out << "difference_gcd " << limit.difference_gcd << "\n";
  out << "stabilization_k "
      << (limit.stabilization_k ? std::to_string(*limit.stabilization_k) : std::string("none"))
      << "\n";
  const int shown = limit.stabilization_k ? *limit.stabilization_k + 1 : o.k_max;
  out << "k\tsize\tcovers_gcd_lattice\tsupport\n";
  for (int k = 1; k <= shown; ++k) {
    const auto support = sumset_support(m, k, range);
    const bool full = static_cast<int>(support.size()) == range / limit.gcd + 1;
    std::string listed = join(support);
    if (support.size() > 64) {
      listed = join(std::vector<int>(support.begin(), support.begin() + 64)) + ",...";
    }
    out << k << "\t" << support.size() << "\t" << (full ? "yes" : "no") << "\t{" << listed
        << "}\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fundamental-component enhancement toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  AnalyzeOptions ao;
  auto* analyze = app.add_subcommand(
      "analyze",
      "Activate a signal and export its spectrum, spectrogram and energy ratios.\n"
      "Input: CSV ('sample_rate,<Hz>' header, one sample per line) or WAV (integer PCM\n"
      "16/24/32-bit, first channel, scaled to [-1, 1] by the integer full scale).");
  analyze->add_option("input", ao.input, "Signal file (CSV or WAV)")->required();
  analyze->add_option("--activation", ao.activation, "abs | relu | heps | none")
      ->check(CLI::IsMember({"abs", "relu", "heps", "none"}));
  analyze->add_option("--epsilon", ao.epsilon, "epsilon of heps, in (0, 1)")
      ->check(CLI::Range(0.0, 1.0));
  analyze->add_option("--window", ao.window, "STFT window length in samples (default 2 s)");
  analyze->add_option("--hop", ao.hop, "STFT hop in samples (default 0.1 s)");
  analyze->add_option("--fft-length", ao.fft_length, "FFT length (default covers 10 s)");
  analyze->add_option("--export", ao.exports, "Any of csv, pgm, json")
      ->delimiter(',')
      ->check(CLI::IsMember({"csv", "pgm", "json"}));
  analyze->add_option("--if-curve", ao.if_curve, "IF curve file (Hz, one value per frame)");
  analyze->add_option("--half-width", ao.half_width, "Band half-width around the IF (Hz)");
  analyze->add_option("--band-floor", ao.band_floor, "Lower edge of the total band (Hz)");
  analyze->add_option("--band-ceiling", ao.band_ceiling, "Upper edge of the total band (Hz)");
  analyze->add_option("--lo-pct", ao.lo_pct, "Lower display percentile");
  analyze->add_option("--hi-pct", ao.hi_pct, "Upper display percentile");
  analyze->add_option("--fundamental-bin", ao.fundamental_bin, "Bin of the energy ratio numerator");
  analyze->add_option("--max-bin", ao.max_bin, "Last bin of the energy ratio denominator");
  analyze->add_option("--support-threshold", ao.support_threshold,
                      "Bins above this fraction of the largest count as support")
      ->check(CLI::Range(0.0, 1.0));
  analyze->add_flag("--remove-mean", ao.remove_mean, "Subtract the mean before activation");
  analyze->add_option("--out", ao.out_dir, "Output directory");

  VerifyOptions vo;
  auto* verify = app.add_subcommand(
      "verify-theorem", "Compare quadrature of the activated Fourier coefficient with the peak "
                        "asymptotics over an epsilon ladder (JSON lines on stdout).");
  verify->add_option("--signal", vo.signal,
                     "Polynomial JSON: [{\"m\":1,\"re\":1,\"im\":0},...] or "
                     "{\"form\":\"real_cosine\",\"terms\":[...]}")
      ->required();
  verify->add_option("--eps-ladder", vo.ladder, "Strictly decreasing epsilons in (0, 0.1]")
      ->delimiter(',');
  verify->add_option("--slope-limit", vo.slope_limit, "Largest accepted error exponent");
  verify->add_option("--out", vo.out_dir, "Also write report.jsonl and manifest.json here");

  BenchOptions bo;
  auto* bench = app.add_subcommand("synth-bench", "Monte Carlo energy-ratio benchmark.");
  bench->add_option("--trials", bo.trials, "Number of random signals")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bo.seed, "Master seed");
  bench->add_option("--activations", bo.activations, "e.g. abs,relu,h0.2,h0.1,h0.05")
      ->delimiter(',')
      ->check(CLI::Validator(
          [](std::string& name) -> std::string {
            try {
              ActivationSpec::parse(name);
            } catch (const Error& e) {
              return e.what();
            }
            return {};
          },
          "ACTIVATION"));
  bench->add_option("--out", bo.out_dir, "Output directory")->required();
  bench->add_option("--threads", bo.threads,
                    "Worker threads (default: FCE_THREADS or hardware concurrency)");

  SumsetOptions so;
  auto* sumset = app.add_subcommand("sumset", "Difference support of k-fold sumsets.");
  sumset->add_option("--freqs", so.freqs, "Frequencies, e.g. 6,9,33")->delimiter(',')->required();
  sumset->add_option("--kmax", so.k_max, "Largest k")->check(CLI::PositiveNumber);
  sumset->add_option("--range", so.range, "Range limit (default 10 * max)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*analyze) return cmd_analyze(ao, out);
    if (*verify) return cmd_verify_theorem(vo, out);
    if (*bench) return cmd_synth_bench(bo, out);
    if (*sumset) return cmd_sumset(so, out);
  } catch (const InputFormatError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kUsageError;
}

}  // namespace fce::cli

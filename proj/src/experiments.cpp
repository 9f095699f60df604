#include "fce/experiments.hpp"

#include "fce/errors.hpp"
#include "fce/fft.hpp"
#include "fce/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace fce {

namespace {

constexpr double kZeroRatio = 1e-20;
constexpr double kFullRatio = 1.0 - 1e-12;

}  // namespace

std::vector<ActivationSpec> SynthConfig::default_activations() {
  return {ActivationSpec::abs(), ActivationSpec::relu(), ActivationSpec::adaptive_reciprocal(0.2),
          ActivationSpec::adaptive_reciprocal(0.1), ActivationSpec::adaptive_reciprocal(0.05)};
}

void SynthConfig::validate() const {
  if (!(sample_rate > 0.0)) throw PreconditionViolation("SynthConfig: sample_rate must be > 0");
  if (k_min < 1 || k_min > k_max) throw PreconditionViolation("SynthConfig: need 1 <= k_min <= k_max");
  if (freq_min < 2) {
    throw PreconditionViolation("SynthConfig: freq_min must be >= 2 so bin 1 stays empty");
  }
  if (freq_max < freq_min || freq_max - freq_min + 1 < k_max) {
    throw PreconditionViolation("SynthConfig: frequency range cannot hold k_max distinct values");
  }
  if (!(sample_rate > 2.0 * freq_max)) {
    throw NyquistViolation("SynthConfig: sample_rate must exceed 2 * freq_max");
  }
  if (!(density_scale > 0.0)) throw PreconditionViolation("SynthConfig: density_scale must be > 0");
  if (max_bin < 1 || max_bin > static_cast<int>(std::llround(sample_rate)) / 2) {
    throw PreconditionViolation("SynthConfig: max_bin must be in 1..N/2");
  }
  if (trials < 1) throw PreconditionViolation("SynthConfig: trials must be >= 1");
  if (activations.empty()) throw PreconditionViolation("SynthConfig: no activations");
}

std::vector<int> draw_frequencies(const SynthConfig& config, Rng& rng, int count) {
  std::vector<int> remaining;
  std::vector<double> w;
  for (int l = config.freq_min; l <= config.freq_max; ++l) {
    remaining.push_back(l);
    const double x = l / config.density_scale;
    w.push_back(std::exp(-x * x));
  }
  if (count < 0 || count > static_cast<int>(remaining.size())) {
    throw PreconditionViolation("draw_frequencies: count exceeds the frequency range");
  }
  std::vector<int> chosen;
  for (int k = 0; k < count; ++k) {
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    const double target = rng.uniform01() * total;
    double running = 0.0;
    std::size_t pick = w.size() - 1;
    for (std::size_t i = 0; i < w.size(); ++i) {
      running += w[i];
      if (target < running) {
        pick = i;
        break;
      }
    }
    chosen.push_back(remaining[pick]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
    w.erase(w.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return chosen;
}

TrigPolynomial generate_synthetic(const SynthConfig& config, Rng& rng) {
  const auto count = static_cast<int>(rng.uniform_int(config.k_min, config.k_max));

  std::vector<int> chosen;
  for (int attempt = 0;; ++attempt) {
    if (attempt >= 10000) {
      throw RejectionOverflow("generate_synthetic: no gcd-1 frequency set after 10^4 draws");
    }
    chosen = draw_frequencies(config, rng, count);
    int g = 0;
    for (int j : chosen) g = std::gcd(g, j);
    if (g == 1) break;
  }

  std::vector<Term> terms;
  for (int j : chosen) {
    const double amplitude = 1.0 - rng.uniform01();
    const double phase = 2.0 * std::numbers::pi * (1.0 - rng.uniform01());
    terms.push_back({j, std::polar(amplitude, phase)});
  }
  return TrigPolynomial::real_cosine(std::move(terms), 1.0);
}

Histogram Histogram::log_ratio_bins() {
  Histogram h;
  h.edges.push_back(0.0);
  for (int i = 0; i <= 40; ++i) h.edges.push_back(std::pow(10.0, -8.0 + 0.2 * i));
  h.edges.back() = 1.0;
  h.counts.assign(h.edges.size() - 1, 0);
  return h;
}

void Histogram::add(double value) {
  const std::size_t bins = counts.size();
  if (value >= edges.back()) {
    ++counts[bins - 1];
    return;
  }
  auto it = std::upper_bound(edges.begin(), edges.end(), value);
  std::size_t idx = (it == edges.begin()) ? 0 : static_cast<std::size_t>(it - edges.begin()) - 1;
  ++counts[std::min(idx, bins - 1)];
}

double median(std::span<const double> values) {
  if (values.empty()) throw PreconditionViolation("median: empty input");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double median_absolute_deviation(std::span<const double> values) {
  const double m = median(values);
  std::vector<double> dev;
  dev.reserve(values.size());
  for (double v : values) dev.push_back(std::abs(v - m));
  return median(dev);
}

std::vector<std::vector<double>> run_trial_range(const SynthConfig& config, std::size_t begin,
                                                 std::size_t end, unsigned threads) {
  config.validate();
  const std::size_t n = end - begin;
  std::vector<std::vector<double>> ratios(config.activations.size(), std::vector<double>(n));
  parallel_for(n, [&](std::size_t i) {
    Rng rng(child_seed(config.master_seed, begin + i));
    const TrigPolynomial poly = generate_synthetic(config, rng);
    const SampledSignal signal = sample(poly, config.sample_rate, poly.period());
    for (std::size_t a = 0; a < config.activations.size(); ++a) {
      const SampledSignal activated = apply(config.activations[a], signal);
      ratios[a][i] = fundamental_energy_ratio(dft(activated), 1, config.max_bin);
    }
  }, threads == 0 ? worker_count() : threads);
  return ratios;
}

TrialStats summarize(const SynthConfig& config, const std::vector<std::vector<double>>& ratios) {
  TrialStats stats;
  stats.trials_run = ratios.empty() ? 0 : ratios.front().size();
  for (std::size_t a = 0; a < ratios.size(); ++a) {
    ActivationStats s;
    s.activation = config.activations[a].name();
    s.median = median(ratios[a]);
    s.mad = median_absolute_deviation(ratios[a]);
    s.histogram = Histogram::log_ratio_bins();
    for (double r : ratios[a]) s.histogram.add(r);
    stats.per_activation.push_back(std::move(s));
  }
  return stats;
}

TrialStats run_trials(const SynthConfig& config, unsigned threads) {
  return summarize(config, run_trial_range(config, 0, config.trials, threads));
}

TrigPolynomial remove_fundamental(const TrigPolynomial& poly) {
  std::vector<Term> kept;
  for (const Term& term : poly.terms()) {
    if (term.frequency != 1) kept.push_back(term);
  }
  if (kept.empty()) {
    throw PreconditionViolation("remove_fundamental: only a frequency-1 term was present");
  }
  return TrigPolynomial(std::move(kept), poly.period(), poly.form());
}

SampledSignal remove_fundamental(const SampledSignal& signal) {
  const auto& x = signal.samples();
  std::vector<cplx> buffer(x.begin(), x.end());
  auto spectrum = fft::forward(buffer);
  const std::size_t n = spectrum.size();
  spectrum[1] = 0.0;
  spectrum[n - 1] = 0.0;
  const auto back = fft::inverse(spectrum);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = back[i].real();
  return SampledSignal(std::move(out), signal.sample_rate(), signal.start_time());
}

EnhancementPair enhancement_ratio_pair(const SampledSignal& signal, const ActivationSpec& spec) {
  const auto& x = signal.samples();
  if (std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; })) {
    throw ZeroSignal("enhancement_ratio_pair: signal is identically zero");
  }
  const int max_bin = std::min<int>(256, static_cast<int>(x.size() / 2));
  EnhancementPair out;
  out.r_before = fundamental_energy_ratio(dft(signal), 1, max_bin);
  out.r_after = fundamental_energy_ratio(dft(apply(spec, signal)), 1, max_bin);
  if (out.r_before < kZeroRatio) {
    out.category = (out.r_after < kZeroRatio) ? EnhancementCategory::ZeroBothSides
                                               : EnhancementCategory::EnhancedFromZero;
  } else if (out.r_before > kFullRatio) {
    out.category = EnhancementCategory::FullBefore;
  } else if (out.r_after >= kZeroRatio) {
    out.statistic = std::log(out.r_after) / std::log(out.r_before);
  }
  return out;
}

const char* to_string(EnhancementCategory category) {
  switch (category) {
    case EnhancementCategory::Measured:
      return "measured";
    case EnhancementCategory::EnhancedFromZero:
      return "enhanced_from_zero";
    case EnhancementCategory::ZeroBothSides:
      return "zero_both_sides";
    case EnhancementCategory::FullBefore:
      return "full_before";
  }
  return "unknown";
}

}  // namespace fce

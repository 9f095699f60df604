#pragma once

#include "fce/activations.hpp"
#include "fce/rng.hpp"
#include "fce/signal_model.hpp"
#include "fce/spectral.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fce {

struct SynthConfig {
  double sample_rate{512.0};
  int k_min{5};
  int k_max{100};
  int freq_min{2};
  int freq_max{250};
  double density_scale{100.0};
  int max_bin{256};
  std::size_t trials{10000};
  std::uint64_t master_seed{0};
  std::vector<ActivationSpec> activations;

  // The benchmark's five activations: abs, relu, h0.2, h0.1, h0.05.
  static std::vector<ActivationSpec> default_activations();
  // Throws PreconditionViolation when the invariants do not hold.
  void validate() const;
};

// count distinct frequencies from {freq_min..freq_max}, drawn one at a time
// without replacement with weights exp(-(l / density_scale)^2).
std::vector<int> draw_frequencies(const SynthConfig& config, Rng& rng, int count);

// Random 1-periodic cosine sum with gcd-1 support and nothing at bin 1.
//
// Draw order: K ~ U{k_min..k_max}; K distinct frequencies from
// {freq_min..freq_max}, sequentially without replacement with weights
// exp(-(l / density_scale)^2), the whole set redrawn until its gcd is 1;
// then per term a = 1 - u and phase = 2 pi (1 - u'), so a in (0, 1] and
// phase in (0, 2 pi]. Throws RejectionOverflow after 10^4 redraws.
TrigPolynomial generate_synthetic(const SynthConfig& config, Rng& rng);

struct Histogram {
  std::vector<double> edges;  // bins [e_i, e_{i+1}), last one closed
  std::vector<std::size_t> counts;

  // 0, then 10^-8 .. 10^0 in steps of 10^0.2.
  static Histogram log_ratio_bins();
  void add(double value);
};

struct ActivationStats {
  std::string activation;
  double median{0.0};
  double mad{0.0};  // median absolute deviation, unscaled
  Histogram histogram;
};

struct TrialStats {
  std::vector<ActivationStats> per_activation;
  std::size_t trials_run{0};
  std::string rng_algorithm{Rng::kAlgorithm};
};

// ratios[a][i]: energy ratio of trial begin + i under activation a. Trial i
// draws from Rng(child_seed(master_seed, i)).
// threads == 0 uses worker_count(). The result does not depend on it.
std::vector<std::vector<double>> run_trial_range(const SynthConfig& config, std::size_t begin,
                                                 std::size_t end, unsigned threads = 0);

TrialStats summarize(const SynthConfig& config,
                     const std::vector<std::vector<double>>& ratios);

TrialStats run_trials(const SynthConfig& config, unsigned threads = 0);

double median(std::span<const double> values);
double median_absolute_deviation(std::span<const double> values);

// Drops the frequency-1 term. Throws PreconditionViolation if nothing remains.
TrigPolynomial remove_fundamental(const TrigPolynomial& poly);

// Zeroes DFT bins 1 and N-1 and transforms back.
SampledSignal remove_fundamental(const SampledSignal& signal);

enum class EnhancementCategory {
  Measured,          // both ratios usable; statistic = log(r_after) / log(r_before)
  EnhancedFromZero,  // r_before == 0, r_after > 0
  ZeroBothSides,     // r_before == 0, r_after == 0
  FullBefore,        // r_before == 1, log(r_before) == 0
};

struct EnhancementPair {
  double r_before{0.0};
  double r_after{0.0};
  EnhancementCategory category{EnhancementCategory::Measured};
  std::optional<double> statistic;
};

// Ratios are treated as zero below 1e-20 and as one above 1 - 1e-12.
// Throws ZeroSignal for an all-zero input.
EnhancementPair enhancement_ratio_pair(const SampledSignal& signal, const ActivationSpec& spec);

const char* to_string(EnhancementCategory category);

}  // namespace fce

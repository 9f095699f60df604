#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace fce {

using cplx = std::complex<double>;

struct Term {
  int frequency{1};
  cplx amplitude{1.0, 0.0};
};

// How the terms of a TrigPolynomial are read.
//
//   Complex:    f(t) = sum_k a_k exp(i 2 pi m_k t / period)
//   RealCosine: f(t) = sum_k |a_k| cos(2 pi m_k t / period + arg a_k)
//                    = Re sum_k a_k exp(i 2 pi m_k t / period)
enum class Form { Complex, RealCosine };

// Finite trigonometric polynomial with positive integer frequencies.
//
// Construction normalizes the term list: terms are sorted by frequency,
// duplicate frequencies are merged by summing amplitudes and zero amplitudes
// are dropped. Throws PreconditionViolation if a frequency is < 1, the period
// is not positive, or nothing survives normalization (f == 0).
class TrigPolynomial {
 public:
  explicit TrigPolynomial(std::vector<Term> terms,
                          double period = 2.0 * std::numbers::pi,
                          Form form = Form::Complex);

  static TrigPolynomial real_cosine(std::vector<Term> terms,
                                    double period = 2.0 * std::numbers::pi) {
    return TrigPolynomial(std::move(terms), period, Form::RealCosine);
  }

  const std::vector<Term>& terms() const { return terms_; }
  double period() const { return period_; }
  Form form() const { return form_; }
  bool real_cosine_form() const { return form_ == Form::RealCosine; }
  int max_frequency() const { return terms_.back().frequency; }
  double angular_step() const { return 2.0 * std::numbers::pi / period_; }

  // c * f
  TrigPolynomial scaled(cplx c) const;
  // t -> f(t - tau)
  TrigPolynomial shifted(double tau) const;

 private:
  std::vector<Term> terms_;
  double period_;
  Form form_;
};

// Uniformly sampled real signal.
class SampledSignal {
 public:
  SampledSignal(std::vector<double> samples, double sample_rate,
                double start_time = 0.0);

  const std::vector<double>& samples() const { return samples_; }
  double sample_rate() const { return sample_rate_; }
  double start_time() const { return start_time_; }
  std::size_t size() const { return samples_.size(); }
  double duration() const { return static_cast<double>(samples_.size()) / sample_rate_; }

 private:
  std::vector<double> samples_;
  double sample_rate_;
  double start_time_;
};

struct Peak {
  double location{0.0};           // in [0, period)
  double value{0.0};              // g(t) = |f(t)|
  double second_derivative{0.0};  // g''(t), strictly negative
};

struct PeakSet {
  std::vector<Peak> peaks;
  double sup_norm{0.0};
  double period{2.0 * std::numbers::pi};
};

// p(t) = |f(t)|^2 as an exact real trigonometric polynomial,
//   p(t) = c_0 + 2 Re sum_{d>0} c_d exp(i d w t),  w = 2 pi / period,
// with closed-form derivatives.
class ModulusSquared {
 public:
  explicit ModulusSquared(const TrigPolynomial& poly);

  double value(double t) const;
  double first_derivative(double t) const;
  double second_derivative(double t) const;

  // True when every c_d (d > 0) is negligible against c_0.
  bool is_constant() const;
  int max_difference() const { return static_cast<int>(coeffs_.size()) - 1; }
  double period() const { return period_; }

 private:
  template <int Order>
  double eval(double t) const;

  std::vector<cplx> coeffs_;  // c_0 .. c_D
  double period_;
  double omega_;
};

cplx evaluate(const TrigPolynomial& poly, double t);

// Samples Re f at t = n / sample_rate, n = 0 .. round(sample_rate * duration) - 1.
// Throws NyquistViolation unless sample_rate > 2 * max_frequency / period.
SampledSignal sample(const TrigPolynomial& poly, double sample_rate, double duration);

// max_t |f(t)|: dense grid of max(4096, 64 m_n) points followed by
// golden-section refinement of every grid bracket that can hold the maximum.
double sup_norm(const TrigPolynomial& poly);

// All global maximizers of g = |f| on one period, with g and g'' there.
// Throws ConstantModulus if |f| is constant and DegenerateMaximum if some
// global maximum has |g''| < 1e-8.
PeakSet find_global_maxima(const TrigPolynomial& poly);

// gcd of { k >= 1 : |coefficients[k]| > threshold }. Throws EmptySupport if
// no bin qualifies.
int support_gcd(std::span<const cplx> coefficients, double threshold);

// Same, with threshold = relative_threshold * max_{k>=1} |coefficients[k]|.
int support_gcd_relative(std::span<const cplx> coefficients,
                         double relative_threshold = 1e-6);

}  // namespace fce

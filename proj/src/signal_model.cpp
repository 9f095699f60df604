#include "fce/signal_model.hpp"

#include "fce/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace fce {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// exp(i 2 pi d x) with the phase reduced before scaling by 2 pi.
cplx unit_phasor(double d, double x) {
  double cycles = d * x;
  cycles -= std::floor(cycles);
  return std::polar(1.0, kTwoPi * cycles);
}

int grid_size(const TrigPolynomial& poly) {
  return std::max(4096, 64 * poly.max_frequency());
}

double golden_section_max(const ModulusSquared& p, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = p.value(c);
  double fd = p.value(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = p.value(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = p.value(d);
    }
  }
  const double mid = 0.5 * (a + b);
  return std::max({p.value(mid), fc, fd});
}

// Root of p' in [a, b] where p'(a) > 0 >= p'(b): Newton steps on p',
// falling back to bisection whenever a step leaves the bracket.
double refine_critical_point(const ModulusSquared& p, double a, double b) {
  double t = 0.5 * (a + b);
  const double tol = 1e-15 * p.period();
  for (int iter = 0; iter < 200; ++iter) {
    const double d1 = p.first_derivative(t);
    if (d1 > 0.0) {
      a = t;
    } else {
      b = t;
    }
    const double d2 = p.second_derivative(t);
    double next = (d2 != 0.0) ? t - d1 / d2 : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::abs(next - t) <= tol || b - a <= tol) return next;
    t = next;
  }
  return t;
}

double circular_distance(double x, double y, double period) {
  double d = std::fmod(std::abs(x - y), period);
  return std::min(d, period - d);
}

double wrap(double t, double period) {
  double w = std::fmod(t, period);
  if (w < 0.0) w += period;
  if (period - w < 1e-13 * period) w = 0.0;
  return w;
}

}  // namespace

TrigPolynomial::TrigPolynomial(std::vector<Term> terms, double period, Form form)
    : period_(period), form_(form) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw PreconditionViolation("TrigPolynomial: period must be positive and finite");
  }
  std::map<int, cplx> merged;
  for (const Term& term : terms) {
    if (term.frequency < 1) {
      throw PreconditionViolation("TrigPolynomial: frequency " +
                                  std::to_string(term.frequency) + " is < 1");
    }
    merged[term.frequency] += term.amplitude;
  }
  for (const auto& [m, a] : merged) {
    if (a != cplx(0.0, 0.0)) terms_.push_back({m, a});
  }
  if (terms_.empty()) {
    throw PreconditionViolation("TrigPolynomial: polynomial is identically zero");
  }
}

TrigPolynomial TrigPolynomial::scaled(cplx c) const {
  std::vector<Term> out = terms_;
  for (Term& term : out) term.amplitude *= c;
  return TrigPolynomial(std::move(out), period_, form_);
}

TrigPolynomial TrigPolynomial::shifted(double tau) const {
  std::vector<Term> out = terms_;
  for (Term& term : out) term.amplitude *= unit_phasor(-term.frequency, tau / period_);
  return TrigPolynomial(std::move(out), period_, form_);
}

SampledSignal::SampledSignal(std::vector<double> samples, double sample_rate,
                             double start_time)
    : samples_(std::move(samples)), sample_rate_(sample_rate), start_time_(start_time) {
  if (samples_.size() < 2) {
    throw PreconditionViolation("SampledSignal: need at least 2 samples");
  }
  if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_)) {
    throw PreconditionViolation("SampledSignal: sample_rate must be positive");
  }
}

ModulusSquared::ModulusSquared(const TrigPolynomial& poly)
    : period_(poly.period()), omega_(poly.angular_step()) {
  // Two-sided spectrum of f.
  std::vector<std::pair<int, cplx>> spectrum;
  for (const Term& term : poly.terms()) {
    if (poly.real_cosine_form()) {
      spectrum.emplace_back(term.frequency, 0.5 * term.amplitude);
      spectrum.emplace_back(-term.frequency, 0.5 * std::conj(term.amplitude));
    } else {
      spectrum.emplace_back(term.frequency, term.amplitude);
    }
  }
  int span_max = 0;
  for (const auto& [m, a] : spectrum) span_max = std::max(span_max, std::abs(m));
  coeffs_.assign(2 * span_max + 1, cplx(0.0, 0.0));
  int highest = 0;
  for (const auto& [mj, aj] : spectrum) {
    for (const auto& [mk, ak] : spectrum) {
      const int d = mj - mk;
      if (d < 0) continue;
      coeffs_[d] += aj * std::conj(ak);
      highest = std::max(highest, d);
    }
  }
  coeffs_.resize(highest + 1);
}

template <int Order>
double ModulusSquared::eval(double t) const {
  const double x = t / period_;
  double sum = 0.0;
  for (std::size_t d = 1; d < coeffs_.size(); ++d) {
    const cplx z = coeffs_[d] * unit_phasor(static_cast<double>(d), x);
    const double w = omega_ * static_cast<double>(d);
    if constexpr (Order == 0) {
      sum += z.real();
    } else if constexpr (Order == 1) {
      sum += -w * z.imag();
    } else {
      sum += -w * w * z.real();
    }
  }
  sum *= 2.0;
  if constexpr (Order == 0) sum += coeffs_[0].real();
  return sum;
}

double ModulusSquared::value(double t) const { return eval<0>(t); }
double ModulusSquared::first_derivative(double t) const { return eval<1>(t); }
double ModulusSquared::second_derivative(double t) const { return eval<2>(t); }

bool ModulusSquared::is_constant() const {
  const double scale = std::abs(coeffs_[0]);
  for (std::size_t d = 1; d < coeffs_.size(); ++d) {
    if (std::abs(coeffs_[d]) > 1e-14 * scale) return false;
  }
  return true;
}

cplx evaluate(const TrigPolynomial& poly, double t) {
  const double x = t / poly.period();
  cplx sum(0.0, 0.0);
  for (const Term& term : poly.terms()) {
    sum += term.amplitude * unit_phasor(term.frequency, x);
  }
  if (poly.real_cosine_form()) return {sum.real(), 0.0};
  return sum;
}

SampledSignal sample(const TrigPolynomial& poly, double sample_rate, double duration) {
  if (!(duration > 0.0)) {
    throw PreconditionViolation("sample: duration must be positive");
  }
  const double highest = poly.max_frequency() / poly.period();
  if (!(sample_rate > 2.0 * highest)) {
    throw NyquistViolation("sample: rate " + std::to_string(sample_rate) +
                           " Hz does not exceed twice the top frequency " +
                           std::to_string(highest) + " Hz");
  }
  const auto n = static_cast<std::size_t>(std::llround(sample_rate * duration));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = evaluate(poly, static_cast<double>(i) / sample_rate).real();
  }
  return SampledSignal(std::move(out), sample_rate, 0.0);
}

double sup_norm(const TrigPolynomial& poly) {
  const ModulusSquared p(poly);
  const double period = poly.period();
  const int n = grid_size(poly);
  const double h = period / n;
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = p.value(i * h);
  const double grid_max = *std::max_element(grid.begin(), grid.end());

  // A band-limited p can exceed its grid maximum by well under 1% at this
  // density, so only brackets within that margin need refinement.
  double best = grid_max;
  for (int i = 0; i < n; ++i) {
    const double left = grid[(i + n - 1) % n];
    const double right = grid[(i + 1) % n];
    if (grid[i] < left || grid[i] < right) continue;
    if (grid[i] < grid_max * (1.0 - 1e-2)) continue;
    const double t = i * h;
    best = std::max(best, golden_section_max(p, t - h, t + h, 1e-12 * period));
  }
  return std::sqrt(std::max(best, 0.0));
}

PeakSet find_global_maxima(const TrigPolynomial& poly) {
  const ModulusSquared p(poly);
  if (p.is_constant()) {
    throw ConstantModulus("find_global_maxima: |f| is constant, maxima are not isolated");
  }
  const double period = poly.period();
  const int n = grid_size(poly);
  const double h = period / n;
  std::vector<double> slope(n);
  for (int i = 0; i < n; ++i) slope[i] = p.first_derivative(i * h);

  std::vector<double> roots;
  for (int i = 0; i < n; ++i) {
    const double a = i * h;
    const double s0 = slope[i];
    const double s1 = slope[(i + 1) % n];
    if (s0 > 0.0 && s1 <= 0.0) roots.push_back(wrap(refine_critical_point(p, a, a + h), period));
  }

  std::vector<Peak> candidates;
  for (double t : roots) {
    const bool duplicate = std::any_of(candidates.begin(), candidates.end(), [&](const Peak& q) {
      return circular_distance(q.location, t, period) < 1e-6 * period;
    });
    if (duplicate) continue;
    const double pv = p.value(t);
    const double g = std::sqrt(std::max(pv, 0.0));
    if (g <= 0.0) continue;
    // p' = 0 at a critical point, so g'' = p'' / (2 g).
    candidates.push_back({t, g, p.second_derivative(t) / (2.0 * g)});
  }

  PeakSet out;
  out.period = period;
  out.sup_norm = sup_norm(poly);
  for (const Peak& q : candidates) out.sup_norm = std::max(out.sup_norm, q.value);
  for (const Peak& q : candidates) {
    if (q.value < out.sup_norm * (1.0 - 1e-9)) continue;
    if (std::abs(q.second_derivative) < 1e-8 || !(q.second_derivative < 0.0)) {
      throw DegenerateMaximum("find_global_maxima: global maximum at t=" +
                              std::to_string(q.location) +
                              " has g''=" + std::to_string(q.second_derivative) +
                              " (need g'' < 0 with |g''| >= 1e-8)");
    }
    out.peaks.push_back(q);
  }
  if (out.peaks.empty()) {
    // Only reachable when the top of |f| is so flat that p' never changes sign
    // on the grid.
    throw DegenerateMaximum("find_global_maxima: no isolated global maximum found");
  }
  std::sort(out.peaks.begin(), out.peaks.end(),
            [](const Peak& a, const Peak& b) { return a.location < b.location; });
  return out;
}

int support_gcd(std::span<const cplx> coefficients, double threshold) {
  int g = 0;
  for (std::size_t k = 1; k < coefficients.size(); ++k) {
    if (std::abs(coefficients[k]) > threshold) g = std::gcd(g, static_cast<int>(k));
  }
  if (g == 0) throw EmptySupport("support_gcd: no bin k >= 1 exceeds the threshold");
  return g;
}

int support_gcd_relative(std::span<const cplx> coefficients, double relative_threshold) {
  double peak = 0.0;
  for (std::size_t k = 1; k < coefficients.size(); ++k) {
    peak = std::max(peak, std::abs(coefficients[k]));
  }
  return support_gcd(coefficients, relative_threshold * peak);
}

}  // namespace fce

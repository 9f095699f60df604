#include "fce/theory.hpp"

#include "fce/activations.hpp"
#include "fce/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace fce {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct AnglePeak {
  double theta;
  double weight;  // 1 / sqrt(-g''(theta) / (2 ||g||))
};

std::vector<AnglePeak> to_angle(const PeakSet& peaks) {
  const double scale = peaks.period / kTwoPi;  // dt / dtheta
  std::vector<AnglePeak> out;
  for (const Peak& p : peaks.peaks) {
    const double g2 = p.second_derivative * scale * scale;
    out.push_back({kTwoPi * p.location / peaks.period,
                   1.0 / std::sqrt(-g2 / (2.0 * peaks.sup_norm))});
  }
  return out;
}

std::vector<double> seed_breakpoints(const PeakSet* peaks, double epsilon) {
  std::vector<double> points;
  for (int i = 0; i <= 64; ++i) points.push_back(kTwoPi * i / 64.0);
  if (peaks != nullptr && epsilon < 1.0) {
    const double inner = std::sqrt(epsilon) / 8.0;
    const double outer = std::pow(epsilon, 0.25);
    for (const AnglePeak& p : to_angle(*peaks)) {
      points.push_back(p.theta);
      for (double w = inner; w < outer * 2.0; w *= 2.0) {
        for (double t : {p.theta - w, p.theta + w}) {
          double wrapped = std::fmod(t, kTwoPi);
          if (wrapped < 0.0) wrapped += kTwoPi;
          points.push_back(wrapped);
        }
      }
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

FundamentalIntegral integrate_activated(const TrigPolynomial& poly, const PeakSet* peaks,
                                        double norm, double epsilon, int target_bin) {
  const double period = poly.period();
  auto integrand = [&](double theta) -> cplx {
    const double g = std::abs(evaluate(poly, theta * period / kTwoPi));
    const double h = (epsilon >= 1.0) ? 1.0 : h_eps(g / norm, epsilon);
    return h * std::polar(1.0, target_bin * theta);
  };
  QuadratureOptions options;
  options.abs_tol = 1e-9 / std::sqrt(epsilon);
  const auto points = seed_breakpoints(peaks, epsilon);
  const QuadratureResult r = integrate(integrand, points, options);
  return {r.value, r.error_estimate, r.panels};
}

}  // namespace

double cauchy_tail_integral(double A, double B, double C) {
  if (!(A > 0.0 && B > 0.0 && C >= 0.0)) {
    throw PreconditionViolation("cauchy_tail_integral: need A > 0, B > 0, C >= 0");
  }
  return (kPi - 2.0 * std::atan(std::sqrt(B / A) * C)) / std::sqrt(A * B);
}

FundamentalIntegral numeric_fundamental_integral_detailed(const TrigPolynomial& poly,
                                                          double epsilon, int target_bin) {
  if (epsilon == 1.0) {
    return integrate_activated(poly, nullptr, sup_norm(poly), epsilon, target_bin);
  }
  const PeakSet peaks = find_global_maxima(poly);
  return numeric_fundamental_integral_detailed(poly, peaks, epsilon, target_bin);
}

FundamentalIntegral numeric_fundamental_integral_detailed(const TrigPolynomial& poly,
                                                          const PeakSet& peaks, double epsilon,
                                                          int target_bin) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw PreconditionViolation("numeric_fundamental_integral: epsilon must be in (0, 1]");
  }
  return integrate_activated(poly, &peaks, peaks.sup_norm, epsilon, target_bin);
}

cplx asymptotic_prediction(const PeakSet& peaks, double epsilon, int target_bin) {
  if (peaks.peaks.empty()) throw PreconditionViolation("asymptotic_prediction: no peaks");
  cplx sum(0.0, 0.0);
  for (const Peak& p : peaks.peaks) {
    if (!(p.second_derivative < 0.0)) {
      throw PreconditionViolation("asymptotic_prediction: peak with g'' >= 0");
    }
  }
  for (const AnglePeak& p : to_angle(peaks)) sum += p.weight * std::polar(1.0, target_bin * p.theta);
  return sum * (kPi / std::sqrt(epsilon));
}

bool prediction_cancels(const PeakSet& peaks, int target_bin) {
  cplx sum(0.0, 0.0);
  double scale = 0.0;
  for (const AnglePeak& p : to_angle(peaks)) {
    sum += p.weight * std::polar(1.0, target_bin * p.theta);
    scale += p.weight;
  }
  return std::abs(sum) <= 1e-9 * scale;
}

AsymptoticReport make_report(double epsilon, cplx numeric_integral, cplx prediction,
                             bool cancels, double quadrature_error) {
  AsymptoticReport r;
  r.epsilon = epsilon;
  r.numeric_integral = numeric_integral;
  r.prediction = prediction;
  r.abs_error = std::abs(numeric_integral - prediction);
  if (!cancels && prediction != cplx(0.0, 0.0)) r.rel_error = r.abs_error / std::abs(prediction);
  r.quadrature_error = quadrature_error;
  return r;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw PreconditionViolation("least_squares_slope: need >= 2 paired points");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0.0)) throw PreconditionViolation("least_squares_slope: x values are all equal");
  return sxy / sxx;
}

ScalingVerification scaling_verification(const TrigPolynomial& poly,
                                         std::span<const double> epsilons, double slope_limit) {
  if (epsilons.size() < 2) {
    throw PreconditionViolation("scaling_verification: need at least two epsilons");
  }
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0 && epsilons[i] <= 0.1)) {
      throw PreconditionViolation("scaling_verification: every epsilon must be in (0, 0.1]");
    }
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) {
      throw PreconditionViolation("scaling_verification: epsilons must be strictly decreasing");
    }
  }
  const PeakSet peaks = find_global_maxima(poly);
  ScalingVerification out;
  out.slope_limit = slope_limit;
  out.cancellation = prediction_cancels(peaks);
  std::vector<double> log_inv_eps;
  std::vector<double> log_err;
  for (double eps : epsilons) {
    const FundamentalIntegral integral = numeric_fundamental_integral_detailed(poly, peaks, eps);
    const cplx prediction = asymptotic_prediction(peaks, eps);
    out.reports.push_back(
        make_report(eps, integral.value, prediction, out.cancellation, integral.error_estimate));
    const double err = out.cancellation
                           ? std::max(std::abs(integral.value), out.noise_floor)
                           : std::max(out.reports.back().abs_error, out.noise_floor);
    log_inv_eps.push_back(std::log(1.0 / eps));
    log_err.push_back(std::log(err));
  }
  out.slope = least_squares_slope(log_inv_eps, log_err);
  out.passed = out.slope <= slope_limit;
  return out;
}

int frequency_gcd(const TrigPolynomial& poly) {
  int g = 0;
  for (const Term& term : poly.terms()) g = std::gcd(g, term.frequency);
  return g;
}

GcdReduction gcd_reduction_check(const TrigPolynomial& poly, double epsilon) {
  GcdReduction out;
  out.gcd = frequency_gcd(poly);
  if (out.gcd <= 1) {
    throw PreconditionViolation("gcd_reduction_check: frequencies are coprime (gcd 1)");
  }
  const PeakSet peaks = find_global_maxima(poly);
  out.bin_one = numeric_fundamental_integral_detailed(poly, peaks, epsilon, 1).value;
  out.bin_gcd = numeric_fundamental_integral_detailed(poly, peaks, epsilon, out.gcd).value;
  return out;
}

}  // namespace fce

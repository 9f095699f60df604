#pragma once

#include "fce/quadrature.hpp"
#include "fce/signal_model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace fce {

// Numerical check of the peak asymptotics of the adaptive reciprocal
// activation. All integrals use the angle theta = 2 pi t / period, so
//
//   I_k(eps) = int_0^{2 pi} h_eps(|f| / ||f||_inf) exp(i k theta) d theta
//
// and, with theta_j the global maxima of g = |f| and g'' taken in theta,
//
//   I_k(eps) ~ (pi / sqrt(eps)) sum_j exp(i k theta_j) / sqrt(-g''(theta_j) / (2 ||g||))
//
// up to O(eps^{-1/4}).

struct AsymptoticReport {
  double epsilon{0.0};
  cplx numeric_integral;
  cplx prediction;
  double abs_error{0.0};
  // abs_error / |prediction|; empty when the prediction cancels to zero.
  std::optional<double> rel_error;
  double quadrature_error{0.0};
};

// int_{|t| > C} dt / (A + B t^2) = (pi - 2 atan(sqrt(B / A) C)) / sqrt(A B).
double cauchy_tail_integral(double A, double B, double C);

struct FundamentalIntegral {
  cplx value;
  double error_estimate{0.0};
  std::size_t panels{0};
};

// Adaptive quadrature of I_k(eps). Panels are seeded around every peak: width
// sqrt(eps)/8 at the center doubling outward to eps^{1/4}, plus 64 uniform
// panels over the period. Absolute tolerance 1e-9 / sqrt(eps).
//
// eps == 1 is accepted (h == 1, the result is 0 up to rounding) and needs no
// peak analysis; otherwise eps must be in (0, 1) and the peaks non-degenerate.
FundamentalIntegral numeric_fundamental_integral_detailed(const TrigPolynomial& poly,
                                                          double epsilon, int target_bin = 1);

// Same, reusing a PeakSet already computed for poly.
FundamentalIntegral numeric_fundamental_integral_detailed(const TrigPolynomial& poly,
                                                          const PeakSet& peaks, double epsilon,
                                                          int target_bin = 1);

inline cplx numeric_fundamental_integral(const TrigPolynomial& poly, double epsilon,
                                         int target_bin = 1) {
  return numeric_fundamental_integral_detailed(poly, epsilon, target_bin).value;
}

// Leading-order term of I_k(eps) from the peak data (k = target_bin).
cplx asymptotic_prediction(const PeakSet& peaks, double epsilon, int target_bin = 1);

// True when the peak sum cancels: |sum_j w_j e^{i k theta_j}| <= 1e-9 sum_j w_j.
bool prediction_cancels(const PeakSet& peaks, int target_bin = 1);

AsymptoticReport make_report(double epsilon, cplx numeric_integral, cplx prediction,
                             bool cancels, double quadrature_error = 0.0);

struct ScalingVerification {
  std::vector<AsymptoticReport> reports;
  bool cancellation{false};
  // Least-squares slope of log(error) against log(1/eps). The error is
  // abs_error, or max(|I|, noise_floor) in the cancellation case.
  double slope{0.0};
  double slope_limit{0.3};
  double noise_floor{1e-6};
  bool passed{false};
};

// One report per eps (strictly decreasing, each in (0, 0.1]) and the fitted
// error exponent; passed iff slope <= slope_limit.
ScalingVerification scaling_verification(const TrigPolynomial& poly,
                                         std::span<const double> epsilons,
                                         double slope_limit = 0.3);

double least_squares_slope(std::span<const double> x, std::span<const double> y);

struct GcdReduction {
  int gcd{1};
  cplx bin_one;
  cplx bin_gcd;
};

// I_1 and I_G for a polynomial whose frequencies share G > 1.
// Throws PreconditionViolation when G == 1.
GcdReduction gcd_reduction_check(const TrigPolynomial& poly, double epsilon);

int frequency_gcd(const TrigPolynomial& poly);

}  // namespace fce

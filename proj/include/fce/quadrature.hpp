#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

namespace fce {

struct QuadratureOptions {
  double abs_tol{1e-10};
  double rel_tol{0.0};
  std::size_t max_panels{400000};
};

struct QuadratureResult {
  std::complex<double> value;
  double error_estimate{0.0};
  std::size_t panels{0};
  std::size_t evaluations{0};
};

using ComplexIntegrand = std::function<std::complex<double>(double)>;

// Globally adaptive 7/15-point Gauss-Kronrod. The initial panels are the
// intervals between consecutive sorted breakpoints; the panel with the largest
// |K15 - G7| is bisected until the summed estimate is at most
// max(abs_tol, rel_tol * |I|). Throws QuadratureNonConvergence when
// max_panels is reached or a panel can no longer be split.
QuadratureResult integrate(const ComplexIntegrand& f, std::span<const double> breakpoints,
                           const QuadratureOptions& options = {});

QuadratureResult integrate(const ComplexIntegrand& f, double a, double b,
                           const QuadratureOptions& options = {});

// Integral over [a, inf) through t = a + s / (1 - s), s in [0, 1).
QuadratureResult integrate_to_infinity(const ComplexIntegrand& f, double a,
                                       const QuadratureOptions& options = {});

}  // namespace fce

#include "fce/quadrature.hpp"

#include "fce/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace fce {

namespace {

using cplx = std::complex<double>;

// Kronrod nodes (descending, last is the center) and weights; Gauss weights
// belong to the odd-indexed Kronrod nodes and the center.
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kKronrod[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kGauss[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  cplx value;
  double error;
};

struct LargerError {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;
  }
};

Panel gauss_kronrod(const ComplexIntegrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const cplx fc = f(center);
  cplx kronrod = fc * kKronrod[7];
  cplx gauss = fc * kGauss[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    const cplx pair = f(center - dx) + f(center + dx);
    kronrod += pair * kKronrod[j];
    if (j % 2 == 1) gauss += pair * kGauss[j / 2];
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate(const ComplexIntegrand& f, std::span<const double> breakpoints,
                           const QuadratureOptions& options) {
  std::vector<double> points(breakpoints.begin(), breakpoints.end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 2) {
    throw PreconditionViolation("integrate: need at least two distinct breakpoints");
  }

  std::priority_queue<Panel, std::vector<Panel>, LargerError> queue;
  QuadratureResult result;
  double total_error = 0.0;
  cplx total(0.0, 0.0);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    Panel p = gauss_kronrod(f, points[i], points[i + 1]);
    total += p.value;
    total_error += p.error;
    queue.push(p);
  }
  result.evaluations = 15 * queue.size();

  const double span = points.back() - points.front();
  while (total_error > std::max(options.abs_tol, options.rel_tol * std::abs(total))) {
    if (queue.size() >= options.max_panels) {
      throw QuadratureNonConvergence("integrate: panel limit reached with error estimate " +
                                     std::to_string(total_error));
    }
    Panel worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) || worst.b - worst.a < 1e-15 * span) {
      throw QuadratureNonConvergence("integrate: panel width at floating-point resolution");
    }
    queue.pop();
    Panel left = gauss_kronrod(f, worst.a, mid);
    Panel right = gauss_kronrod(f, mid, worst.b);
    result.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }

  // Re-sum in position order so the value does not carry the running
  // update's cancellation error.
  std::vector<Panel> panels;
  panels.reserve(queue.size());
  while (!queue.empty()) {
    panels.push_back(queue.top());
    queue.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  result.value = 0.0;
  result.error_estimate = 0.0;
  for (const Panel& p : panels) {
    result.value += p.value;
    result.error_estimate += p.error;
  }
  result.panels = panels.size();
  return result;
}

QuadratureResult integrate(const ComplexIntegrand& f, double a, double b,
                           const QuadratureOptions& options) {
  const double points[2] = {a, b};
  return integrate(f, points, options);
}

QuadratureResult integrate_to_infinity(const ComplexIntegrand& f, double a,
                                       const QuadratureOptions& options) {
  auto mapped = [&](double s) -> cplx {
    const double one_minus = 1.0 - s;
    if (one_minus <= 0.0) return 0.0;
    return f(a + s / one_minus) / (one_minus * one_minus);
  };
  // Geometric breakpoints toward s = 1 resolve slowly decaying tails.
  std::vector<double> points = {0.0};
  for (double gap = 0.5; gap > 1e-12; gap *= 0.5) points.push_back(1.0 - gap);
  points.push_back(1.0);
  return integrate(mapped, points, options);
}

}  // namespace fce

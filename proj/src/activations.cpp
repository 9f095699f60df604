#include "fce/activations.hpp"

#include "fce/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fce {

ActivationSpec ActivationSpec::adaptive_reciprocal(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw PreconditionViolation("adaptive reciprocal activation needs 0 < epsilon < 1");
  }
  return ActivationSpec(ActivationKind::AdaptiveReciprocal, epsilon);
}

ActivationSpec ActivationSpec::parse(const std::string& text) {
  if (text == "abs") return abs();
  if (text == "relu") return relu();
  std::string rest;
  if (text.rfind("heps:", 0) == 0) {
    rest = text.substr(5);
  } else if (text.size() > 1 && text[0] == 'h') {
    rest = text.substr(1);
  } else {
    throw PreconditionViolation("unknown activation '" + text + "'");
  }
  std::size_t used = 0;
  double eps = 0.0;
  try {
    eps = std::stod(rest, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != rest.size()) {
    throw PreconditionViolation("bad epsilon in activation '" + text + "'");
  }
  return adaptive_reciprocal(eps);
}

std::string ActivationSpec::name() const {
  switch (kind_) {
    case ActivationKind::Abs:
      return "abs";
    case ActivationKind::ReLU:
      return "relu";
    case ActivationKind::AdaptiveReciprocal: {
      std::ostringstream os;
      os << 'h' << epsilon_;
      return os.str();
    }
  }
  return {};
}

double h_eps(double x, double epsilon) {
  double a = std::abs(x);
  if (a > 1.0) {
    if (a > 1.0 + 1e-9) {
      throw DomainError("h_eps: |x| = " + std::to_string(a) + " exceeds 1");
    }
    a = 1.0;
  }
  return 1.0 / (1.0 - (1.0 - epsilon) * a);
}

SampledSignal apply(const ActivationSpec& spec, const SampledSignal& signal,
                    std::optional<double> norm) {
  std::vector<double> out(signal.samples());
  switch (spec.kind()) {
    case ActivationKind::Abs:
      for (double& x : out) x = std::abs(x);
      break;
    case ActivationKind::ReLU:
      for (double& x : out) x = std::max(x, 0.0);
      break;
    case ActivationKind::AdaptiveReciprocal: {
      double scale = 0.0;
      if (norm) {
        scale = *norm;
      } else {
        for (double x : out) scale = std::max(scale, std::abs(x));
      }
      if (!(scale > 0.0)) {
        throw ZeroSignal("apply: adaptive reciprocal activation needs a nonzero norm");
      }
      for (double& x : out) x = h_eps(x / scale, spec.epsilon());
      break;
    }
  }
  return SampledSignal(std::move(out), signal.sample_rate(), signal.start_time());
}

}  // namespace fce

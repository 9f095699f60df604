#pragma once

#include "fce/signal_model.hpp"

#include <optional>
#include <string>

namespace fce {

enum class ActivationKind { Abs, ReLU, AdaptiveReciprocal };

// Which pointwise nonlinearity to apply. epsilon is only meaningful for
// AdaptiveReciprocal and must lie in (0, 1).
class ActivationSpec {
 public:
  static ActivationSpec abs() { return ActivationSpec(ActivationKind::Abs, 0.0); }
  static ActivationSpec relu() { return ActivationSpec(ActivationKind::ReLU, 0.0); }
  static ActivationSpec adaptive_reciprocal(double epsilon);

  // "abs", "relu", "heps:<eps>" (also "h<eps>", e.g. "h0.1").
  static ActivationSpec parse(const std::string& text);

  ActivationKind kind() const { return kind_; }
  double epsilon() const { return epsilon_; }
  // Stable label used in reports: "abs", "relu", "h0.1", ...
  std::string name() const;

  friend bool operator==(const ActivationSpec&, const ActivationSpec&) = default;

 private:
  ActivationSpec(ActivationKind kind, double epsilon) : kind_(kind), epsilon_(epsilon) {}

  ActivationKind kind_;
  double epsilon_;
};

// h_eps(x) = 1 / (1 - (1 - eps) |x|) on [-1, 1], with range [1, 1/eps].
// |x| up to 1 + 1e-9 is clamped to 1; beyond that DomainError.
double h_eps(double x, double epsilon);

// Applies the activation sample by sample. For AdaptiveReciprocal the signal
// is divided by `norm` first; norm defaults to max |x_n|. Throws ZeroSignal if
// that norm is zero.
SampledSignal apply(const ActivationSpec& spec, const SampledSignal& signal,
                    std::optional<double> norm = std::nullopt);

}  // namespace fce

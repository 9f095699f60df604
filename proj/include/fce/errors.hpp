#pragma once

#include <stdexcept>
#include <string>

namespace fce {

// Base for every library error. Two families: numerical/assumption failures
// (bad math inputs, violated theorem hypotheses) and input-format failures
// (files the CLI could not parse).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class InputFormatError : public Error {
 public:
  using Error::Error;
};

#define FCE_NUMERICAL_ERROR(Name)            \
  class Name : public NumericalError {       \
   public:                                   \
    using NumericalError::NumericalError;    \
  }

FCE_NUMERICAL_ERROR(PreconditionViolation);
FCE_NUMERICAL_ERROR(NyquistViolation);
FCE_NUMERICAL_ERROR(DegenerateMaximum);
FCE_NUMERICAL_ERROR(ConstantModulus);
FCE_NUMERICAL_ERROR(EmptySupport);
FCE_NUMERICAL_ERROR(DomainError);
FCE_NUMERICAL_ERROR(ZeroSignal);
FCE_NUMERICAL_ERROR(ZeroDenominator);
FCE_NUMERICAL_ERROR(SignalTooShort);
FCE_NUMERICAL_ERROR(EmptyBand);
FCE_NUMERICAL_ERROR(QuadratureNonConvergence);
FCE_NUMERICAL_ERROR(RejectionOverflow);

#undef FCE_NUMERICAL_ERROR

}  // namespace fce

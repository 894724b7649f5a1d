#pragma once

#include <stdexcept>
#include <string>

namespace ttvp {

/// Bad input detected before any numerical work starts.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class OutOfRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Base for failures that happen while iterating (Newton, bisection, blow-up).
/// The CLI maps every NumericalError to exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DivergenceError : public NumericalError {
public:
    DivergenceError(int step, double last_finite);
    int step() const noexcept { return step_; }
    /// Last finite state before the solution left the representable range.
    double last_finite() const noexcept { return last_finite_; }

private:
    int step_;
    double last_finite_;
};

class ImplicitStepError : public NumericalError {
public:
    ImplicitStepError(int step, double residual, double last_accepted = 0.0);
    int step() const noexcept { return step_; }
    double residual() const noexcept { return residual_; }
    /// State at the last accepted step; its sign gives the direction of a blow-up.
    double last_accepted() const noexcept { return last_accepted_; }

private:
    int step_;
    double residual_;
    double last_accepted_;
};

class SingularSystemError : public NumericalError {
public:
    explicit SingularSystemError(int panel);
    int panel() const noexcept { return panel_; }

private:
    int panel_;
};

class BracketError : public NumericalError {
public:
    BracketError(double lo, double hi, double lo_residual, double hi_residual);
    double lo_residual() const noexcept { return lo_residual_; }
    double hi_residual() const noexcept { return hi_residual_; }

private:
    double lo_residual_;
    double hi_residual_;
};

class BisectionLimitError : public NumericalError {
public:
    BisectionLimitError(int iterations, double width);
};

/// Raised by the stability bounds when beta <= 0 (no contraction certificate).
class NoContractionError : public NumericalError {
public:
    explicit NoContractionError(double beta);
};

}  // namespace ttvp

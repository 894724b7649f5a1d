#include "ttvp/errors.hpp"

#include <sstream>

namespace ttvp {

namespace {

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

}  // namespace

DivergenceError::DivergenceError(int step, double last_finite)
    : NumericalError("solution diverged at step " + std::to_string(step) +
                     " (last finite value " + fmt_double(last_finite) + ")"),
      step_(step),
      last_finite_(last_finite) {}

ImplicitStepError::ImplicitStepError(int step, double residual, double last_accepted)
    : NumericalError("Newton iteration did not converge at step " + std::to_string(step) +
                     " (last residual " + fmt_double(residual) + ")"),
      step_(step),
      residual_(residual),
      last_accepted_(last_accepted) {}

SingularSystemError::SingularSystemError(int panel)
    : NumericalError("singular collocation system on panel " + std::to_string(panel)),
      panel_(panel) {}

BracketError::BracketError(double lo, double hi, double lo_residual, double hi_residual)
    : NumericalError("no sign change of the shooting residual on [" + fmt_double(lo) + ", " +
                     fmt_double(hi) + "] (residuals " + fmt_double(lo_residual) + ", " +
                     fmt_double(hi_residual) + ")"),
      lo_residual_(lo_residual),
      hi_residual_(hi_residual) {}

BisectionLimitError::BisectionLimitError(int iterations, double width)
    : NumericalError("bisection stopped after " + std::to_string(iterations) +
                     " iterations with interval width " + fmt_double(width)) {}

NoContractionError::NoContractionError(double beta)
    : NumericalError("contraction constant beta = " + fmt_double(beta) +
                     " is not positive; no stability bound available") {}

}  // namespace ttvp

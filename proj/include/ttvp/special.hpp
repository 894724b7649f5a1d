#pragma once

namespace ttvp {

/// Gamma function by a 9-term Lanczos approximation (g = 7), with the
/// reflection formula below 1/2. Relative error is below 1e-14 on (0, 10].
double gamma_fn(double x);

/// Euler Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b).
double beta_fn(double a, double b);

}  // namespace ttvp

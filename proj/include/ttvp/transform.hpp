#pragma once

#include <span>

#include "ttvp/core.hpp"

namespace ttvp {

/// Plain Caputo problem D^alpha u = g(s, u), u(0) = u0, obtained from a
/// tempered one through u(s) = e^{lambda s} y(s).
struct CaputoIvpSpec {
    double alpha;
    ScalarField g;
    double u0;
    double horizon;

    void validate() const;
};

/// g(s, u) = e^{lambda s} f(s, e^{-lambda s} u) and u0 = y0.
CaputoIvpSpec to_caputo(const IvpSpec& spec);

/// y_i = e^{-lambda t_i} u_i on the same grid.
Trajectory from_caputo(const Trajectory& u_traj, double lambda);

/// Product-trapezoidal approximation of the tempered Riemann-Liouville integral
///   (1/Gamma(alpha)) int_0^{t_k} e^{-lambda (t_k - s)} (t_k - s)^{alpha-1} x(s) ds
/// where x is given by its nodal samples. The kernel power is integrated exactly
/// against the hat functions; the exponential is sampled at the nodes.
double tempered_integral(const UniformGrid& grid, std::span<const double> samples,
                         const TemperedOrder& order, int t_index);

inline double tempered_integral(const Trajectory& samples, const TemperedOrder& order, int t_index) {
    return tempered_integral(samples.grid(), samples.values(), order, t_index);
}

/// L1 discretisation of e^{-lambda t} D^alpha (e^{lambda t} y) at node t_index >= 1.
double tempered_derivative_l1(const Trajectory& y_traj, const TemperedOrder& order, int t_index);

/// max_k |y_k - y0 e^{-lambda t_k} - I^{alpha,lambda}[f(., y(.))](t_k)| on the
/// trajectory's own grid. Independent of how the trajectory was produced.
double volterra_residual(const Trajectory& y_traj, const IvpSpec& spec);

}  // namespace ttvp

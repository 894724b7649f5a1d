#pragma once

#include <span>
#include <utility>

#include "ttvp/core.hpp"

namespace ttvp {

/// gamma = 2 a^alpha ||f|| e^{lambda a} / Gamma(1 + alpha): radius of the ball the
/// terminal-value fixed-point operator maps into itself.
double gamma_bound(double a, const TemperedOrder& order, double f_sup);

/// Gamma(alpha + 1) / (2 a^alpha e^{lambda a}); Lipschitz constants below it give a contraction.
double lipschitz_threshold(double a, const TemperedOrder& order);

/// beta = 1 - 2 L e^{lambda a} a^alpha / Gamma(alpha + 1). beta <= 0 means no contraction.
double beta_constant(double a, const TemperedOrder& order, double lipschitz);

/// ||y - z|| <= |delta_ya| / beta for a change of the weighted terminal value.
double dependence_bound_terminal(double delta_ya, double beta);

/// ||y - z|| <= (2 a^alpha e^{lambda a} / Gamma(alpha + 1)) ||f - f~|| / beta.
double dependence_bound_rhs(double f_dev, double a, const TemperedOrder& order, double beta);

/// Least-squares slope of log(dev) against log(eps). Slope ~ 1 confirms O(eps) dependence.
double dependence_rate_check(std::span<const std::pair<double, double>> observations);

/// D = [0, a] x [centre - gamma, centre + gamma] with centre = e^{-lambda a} ya.
struct DomainRect {
    double t_lo;
    double t_hi;
    double y_lo;
    double y_hi;
};

struct WellPosednessReport {
    double gamma;
    double lipschitz;
    double lipschitz_threshold;
    double beta;
    bool contraction_holds;
    DomainRect domain_rect;
    double f_sup;
    bool f_sup_estimated;
    bool lipschitz_estimated;
};

/// Evaluates the existence/uniqueness constants for a TVP. Missing ||f|| or L
/// are estimated on a 201 x 201 lattice over D (iterating gamma <-> ||f|| a few
/// times, since D depends on gamma).
WellPosednessReport assess_well_posedness(const TvpSpec& tvp);

}  // namespace ttvp

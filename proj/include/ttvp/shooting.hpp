#pragma once

#include <optional>
#include <utility>

#include "ttvp/core.hpp"
#include "ttvp/solvers.hpp"

namespace ttvp {

struct ShootingConfig {
    double epsilon = 1e-10;
    int max_bisections = 200;
    /// Defaults to max(1, |ya|) when unset.
    std::optional<double> bracket_initial_radius;
    double bracket_growth = 2.0;
    int max_expansions = 60;
    /// Steps on [0, a]; the grid step is a / ivp_n.
    int ivp_n = 20;
    MethodChoice method = PredictorCorrector{};
    NewtonConfig newton;

    void validate() const;
};

struct TvpSolution {
    double y0;
    Trajectory trajectory;  // on [0, horizon]
    double terminal_mismatch;  // |y^h(a) - e^{-lambda a} ya|
    int bisection_count;
    double bracket_lo;
    double bracket_hi;
};

/// y^h(a) - e^{-lambda a} ya for the IVP started at y0, n steps on [0, a].
/// A solve that blows up reports +-infinity with the sign of its last finite state.
double shooting_residual(const TvpSpec& tvp, double y0, int n, const MethodChoice& method,
                         const NewtonConfig& newton = {});

/// Expanding symmetric search around ya (the exact answer when f = 0) for a sign change.
std::pair<double, double> find_bracket(const TvpSpec& tvp, const ShootingConfig& cfg);

/// Bisection on y(0), then one solve over [0, horizon] with the same step.
TvpSolution solve_tvp(const TvpSpec& tvp, const ShootingConfig& cfg);

/// Steps over [0, horizon] that keep the step a / ivp_n; throws if a is not a node.
int horizon_steps(const TvpSpec& tvp, int ivp_n);

}  // namespace ttvp

#include "ttvp/shooting.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "ttvp/errors.hpp"
#include "ttvp/transform.hpp"

namespace ttvp {

void ShootingConfig::validate() const {
    if (!(epsilon > 0.0)) throw InvalidArgument("shooting tolerance must be positive");
    if (!(bracket_growth > 1.0)) throw InvalidArgument("bracket growth must exceed 1");
    if (bracket_initial_radius && !(*bracket_initial_radius > 0.0)) {
        throw InvalidArgument("initial bracket radius must be positive");
    }
    if (max_bisections < 1) throw InvalidArgument("max_bisections must be >= 1");
    if (ivp_n < 1) throw InvalidArgument("ivp_n must be >= 1");
    if (const auto* m = std::get_if<NonpolyCollocation>(&method)) m->validate();
    newton.validate();
}

int horizon_steps(const TvpSpec& tvp, int ivp_n) {
    const double ratio = tvp.horizon / tvp.a * static_cast<double>(ivp_n);
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * ratio) {
        throw InvalidArgument("terminal time a = " + std::to_string(tvp.a) +
                              " is not a node of the grid with step a/" + std::to_string(ivp_n) +
                              " over horizon " + std::to_string(tvp.horizon));
    }
    return static_cast<int>(rounded);
}

namespace {

/// Runs forward solves for one TVP on a fixed grid, reusing the collocation
/// moment tables across calls.
class ForwardSolver {
public:
    ForwardSolver(const TvpSpec& tvp, int steps_to_a, int total_steps, const MethodChoice& method,
                  const NewtonConfig& newton)
        : tvp_(tvp), steps_to_a_(steps_to_a), total_steps_(total_steps), method_(method), newton_(newton) {
        if (const auto* m = std::get_if<NonpolyCollocation>(&method_)) {
            const double end = total_steps_ == steps_to_a_ ? tvp_.a : tvp_.horizon;
            const UniformGrid grid(end, total_steps_);
            colloc_ = std::make_unique<CollocationSolver>(tvp_.order.alpha(), grid, *m);
        }
    }

    Trajectory solve(double y0, bool full) const {
        const int steps = full ? total_steps_ : steps_to_a_;
        const double end = full ? tvp_.horizon : tvp_.a;
        IvpSpec ivp{tvp_.order, tvp_.f, y0, end};
        if (colloc_) {
            const CaputoIvpSpec cap = to_caputo(ivp);
            return from_caputo(colloc_->solve(cap.g, cap.u0, newton_, steps), tvp_.order.lambda());
        }
        return solve_ivp(ivp, steps, method_, newton_);
    }

    double residual(double y0) const {
        try {
            const Trajectory y = solve(y0, false);
            return y[y.size() - 1] - tvp_.target_value();
        } catch (const DivergenceError& e) {
            return std::copysign(std::numeric_limits<double>::infinity(), e.last_finite());
        } catch (const ImplicitStepError& e) {
            // No root for the implicit step: the trajectory has left the range of the scheme.
            return std::copysign(std::numeric_limits<double>::infinity(), e.last_accepted());
        }
    }

private:
    const TvpSpec& tvp_;
    int steps_to_a_;
    int total_steps_;
    MethodChoice method_;
    NewtonConfig newton_;
    std::unique_ptr<CollocationSolver> colloc_;
};

bool opposite_signs(double a, double b) { return (a <= 0.0 && b >= 0.0) || (a >= 0.0 && b <= 0.0); }

std::pair<double, double> bracket_with(const ForwardSolver& solver, const TvpSpec& tvp, const ShootingConfig& cfg) {
    const double center = tvp.ya;
    double radius = cfg.bracket_initial_radius.value_or(std::max(1.0, std::abs(center)));
    double lo = center - radius;
    double hi = center + radius;
    double r_lo = solver.residual(lo);
    double r_hi = solver.residual(hi);
    for (int expansion = 0; expansion < cfg.max_expansions; ++expansion) {
        if (opposite_signs(r_lo, r_hi)) return {lo, hi};
        radius *= cfg.bracket_growth;
        lo = center - radius;
        hi = center + radius;
        r_lo = solver.residual(lo);
        r_hi = solver.residual(hi);
    }
    if (opposite_signs(r_lo, r_hi)) return {lo, hi};
    throw BracketError(lo, hi, r_lo, r_hi);
}

}  // namespace

double shooting_residual(const TvpSpec& tvp, double y0, int n, const MethodChoice& method,
                         const NewtonConfig& newton) {
    tvp.validate();
    const ForwardSolver solver(tvp, n, n, method, newton);
    return solver.residual(y0);
}

std::pair<double, double> find_bracket(const TvpSpec& tvp, const ShootingConfig& cfg) {
    tvp.validate();
    cfg.validate();
    const ForwardSolver solver(tvp, cfg.ivp_n, cfg.ivp_n, cfg.method, cfg.newton);
    return bracket_with(solver, tvp, cfg);
}

TvpSolution solve_tvp(const TvpSpec& tvp, const ShootingConfig& cfg) {
    tvp.validate();
    cfg.validate();
    const int total = horizon_steps(tvp, cfg.ivp_n);
    const ForwardSolver solver(tvp, cfg.ivp_n, total, cfg.method, cfg.newton);

    const double center = tvp.ya;
    if (solver.residual(center) == 0.0) {
        Trajectory traj = solver.solve(center, true);
        const double mismatch = std::abs(traj[cfg.ivp_n] - tvp.target_value());
        return TvpSolution{center, std::move(traj), mismatch, 0, center, center};
    }

    auto [lo, hi] = bracket_with(solver, tvp, cfg);
    const double bracket_lo = lo;
    const double bracket_hi = hi;
    double r_lo = solver.residual(lo);
    int count = 0;
    double y0 = 0.5 * (lo + hi);
    while (hi - lo > cfg.epsilon) {
        if (count >= cfg.max_bisections) throw BisectionLimitError(count, hi - lo);
        const double mid = 0.5 * (lo + hi);
        const double r_mid = solver.residual(mid);
        ++count;
        if (r_mid == 0.0) {
            lo = hi = mid;
            break;
        }
        if (opposite_signs(r_lo, r_mid)) {
            hi = mid;
        } else {
            lo = mid;
            r_lo = r_mid;
        }
    }
    y0 = 0.5 * (lo + hi);

    Trajectory traj = solver.solve(y0, true);
    const int ia = cfg.ivp_n;
    const double mismatch = std::abs(traj[ia] - tvp.target_value());
    return TvpSolution{y0, std::move(traj), mismatch, count, bracket_lo, bracket_hi};
}

}  // namespace ttvp

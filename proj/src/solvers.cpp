#include "ttvp/solvers.hpp"

#include <cmath>
#include <string>

#include "ttvp/errors.hpp"
#include "ttvp/special.hpp"

namespace ttvp {

NonpolyCollocation NonpolyCollocation::with_defaults(int order_m) {
    NonpolyCollocation m;
    m.order_m = order_m;
    if (order_m == 1) {
        m.points = {1.0 / 3.0, 1.0};
    } else if (order_m == 2) {
        m.points = {0.25, 0.5, 0.75, 1.0};
    } else {
        throw InvalidArgument("collocation order must be 1 or 2, got " + std::to_string(order_m));
    }
    return m;
}

void NonpolyCollocation::validate() const {
    if (order_m != 1 && order_m != 2) {
        throw InvalidArgument("collocation order must be 1 or 2, got " + std::to_string(order_m));
    }
    if (static_cast<int>(points.size()) != basis_size()) {
        throw InvalidArgument("collocation order " + std::to_string(order_m) + " needs " +
                              std::to_string(basis_size()) + " points, got " + std::to_string(points.size()));
    }
    double prev = 0.0;
    for (double c : points) {
        if (!(c > prev) || c > 1.0) {
            throw InvalidArgument("collocation points must be strictly increasing in (0, 1]");
        }
        prev = c;
    }
}

void NewtonConfig::validate() const {
    if (!(tol > 0.0)) throw InvalidArgument("Newton tolerance must be positive");
    if (max_iter < 1) throw InvalidArgument("Newton max_iter must be >= 1");
}

double abm_predictor_weight(double alpha, int n, int j, double h) {
    if (j < 0 || j > n) throw OutOfRange("abm_predictor_weight: need 0 <= j <= n");
    const double nj = static_cast<double>(n - j);
    return std::pow(h, alpha) / alpha * (std::pow(nj + 1.0, alpha) - std::pow(nj, alpha));
}

double abm_corrector_weight(double alpha, int n, int j, double h) {
    if (j < 0 || j > n + 1) throw OutOfRange("abm_corrector_weight: need 0 <= j <= n+1");
    const double scale = std::pow(h, alpha) / (alpha * (alpha + 1.0));
    const double dn = static_cast<double>(n);
    if (j == 0) return scale * (std::pow(dn, alpha + 1.0) - (dn - alpha) * std::pow(dn + 1.0, alpha));
    if (j == n + 1) return scale;
    const double m = static_cast<double>(n - j);
    return scale * (std::pow(m + 2.0, alpha + 1.0) + std::pow(m, alpha + 1.0) - 2.0 * std::pow(m + 1.0, alpha + 1.0));
}

namespace {

void check_steps(int n) {
    if (n < 1) throw InvalidArgument("step count must be >= 1, got " + std::to_string(n));
}

}  // namespace

Trajectory solve_caputo_abm(const CaputoIvpSpec& spec, int n) {
    spec.validate();
    check_steps(n);
    const UniformGrid grid(spec.horizon, n);
    const double alpha = spec.alpha;
    const double h = grid.step();
    const double ha = std::pow(h, alpha);
    const double inv_gamma = 1.0 / gamma_fn(alpha);

    // pw[m] = m^alpha, qw[m] = m^{alpha+1}
    std::vector<double> pw(static_cast<std::size_t>(n) + 3);
    std::vector<double> qw(pw.size());
    for (std::size_t m = 0; m < pw.size(); ++m) {
        pw[m] = std::pow(static_cast<double>(m), alpha);
        qw[m] = std::pow(static_cast<double>(m), alpha + 1.0);
    }
    const double pred_scale = ha / alpha;
    const double corr_scale = ha / (alpha * (alpha + 1.0));

    std::vector<double> u(static_cast<std::size_t>(n) + 1);
    std::vector<double> gv(u.size());
    u[0] = spec.u0;
    gv[0] = spec.g(0.0, spec.u0);
    if (!std::isfinite(gv[0])) throw DivergenceError(0, spec.u0);

    for (int step = 0; step < n; ++step) {
        const auto sn = static_cast<std::size_t>(step);
        double pred = 0.0;
        double corr = (qw[sn] - (static_cast<double>(step) - alpha) * pw[sn + 1]) * gv[0];
        pred += (pw[sn + 1] - pw[sn]) * gv[0];
        for (int j = 1; j <= step; ++j) {
            const auto m = static_cast<std::size_t>(step - j);
            pred += (pw[m + 1] - pw[m]) * gv[static_cast<std::size_t>(j)];
            corr += (qw[m + 2] + qw[m] - 2.0 * qw[m + 1]) * gv[static_cast<std::size_t>(j)];
        }
        const double t_next = grid.node(step + 1);
        const double u_pred = spec.u0 + inv_gamma * pred_scale * pred;
        const double g_pred = spec.g(t_next, u_pred);
        const double u_next = spec.u0 + inv_gamma * corr_scale * (corr + g_pred);
        const double g_next = spec.g(t_next, u_next);
        if (!std::isfinite(u_next) || !std::isfinite(g_next) || !std::isfinite(u_pred)) {
            throw DivergenceError(step + 1, u[sn]);
        }
        u[sn + 1] = u_next;
        gv[sn + 1] = g_next;
    }
    return Trajectory(grid, std::move(u));
}

Trajectory solve_caputo_bdq(const CaputoIvpSpec& spec, int n, const NewtonConfig& newton) {
    spec.validate();
    newton.validate();
    check_steps(n);
    const UniformGrid grid(spec.horizon, n);
    const double alpha = spec.alpha;
    const double c = std::pow(grid.step(), -alpha) / gamma_fn(2.0 - alpha);

    // bw[m] = (m+1)^{1-alpha} - m^{1-alpha}
    std::vector<double> bw(static_cast<std::size_t>(n));
    for (std::size_t m = 0; m < bw.size(); ++m) {
        const double dm = static_cast<double>(m);
        bw[m] = std::pow(dm + 1.0, 1.0 - alpha) - std::pow(dm, 1.0 - alpha);
    }

    std::vector<double> u(static_cast<std::size_t>(n) + 1);
    u[0] = spec.u0;
    for (int k = 1; k <= n; ++k) {
        const auto sk = static_cast<std::size_t>(k);
        double history = 0.0;
        for (int j = 0; j + 1 < k; ++j) {
            const auto sj = static_cast<std::size_t>(j);
            history += bw[sk - 1 - sj] * (u[sj + 1] - u[sj]);
        }
        const double t = grid.node(k);
        const double prev = u[sk - 1];
        auto residual = [&](double v) { return c * ((v - prev) + history) - spec.g(t, v); };

        double v = prev;
        double r = residual(v);
        bool converged = false;
        for (int it = 0; it < newton.max_iter; ++it) {
            const double du = 1e-7 * std::max(1.0, std::abs(v));
            const double slope = c - (spec.g(t, v + du) - spec.g(t, v - du)) / (2.0 * du);
            const double delta = r / slope;
            v -= delta;
            r = residual(v);
            if (!std::isfinite(v) || !std::isfinite(r)) throw DivergenceError(k, prev);
            if (std::abs(delta) <= newton.tol * std::max(1.0, std::abs(v))) {
                converged = true;
                break;
            }
        }
        if (!converged) throw ImplicitStepError(k, r, prev);
        u[sk] = v;
    }
    return Trajectory(grid, std::move(u));
}

Trajectory solve_caputo_collocation(const CaputoIvpSpec& spec, int n, const NonpolyCollocation& method,
                                    const NewtonConfig& newton) {
    spec.validate();
    check_steps(n);
    const CollocationSolver solver(spec.alpha, UniformGrid(spec.horizon, n), method);
    return solver.solve(spec.g, spec.u0, newton);
}

Trajectory solve_caputo(const CaputoIvpSpec& spec, int n, const MethodChoice& method, const NewtonConfig& newton) {
    struct Dispatch {
        const CaputoIvpSpec& spec;
        int n;
        const NewtonConfig& newton;
        Trajectory operator()(const BackwardDifference&) const { return solve_caputo_bdq(spec, n, newton); }
        Trajectory operator()(const PredictorCorrector&) const { return solve_caputo_abm(spec, n); }
        Trajectory operator()(const NonpolyCollocation& m) const {
            return solve_caputo_collocation(spec, n, m, newton);
        }
    };
    return std::visit(Dispatch{spec, n, newton}, method);
}

Trajectory solve_ivp_abm(const IvpSpec& spec, int n) {
    return from_caputo(solve_caputo_abm(to_caputo(spec), n), spec.order.lambda());
}

Trajectory solve_ivp_bdq(const IvpSpec& spec, int n, const NewtonConfig& newton) {
    return from_caputo(solve_caputo_bdq(to_caputo(spec), n, newton), spec.order.lambda());
}

Trajectory solve_ivp_collocation(const IvpSpec& spec, int n, const NonpolyCollocation& method,
                                 const NewtonConfig& newton) {
    return from_caputo(solve_caputo_collocation(to_caputo(spec), n, method, newton), spec.order.lambda());
}

Trajectory solve_ivp(const IvpSpec& spec, int n, const MethodChoice& method, const NewtonConfig& newton) {
    return from_caputo(solve_caputo(to_caputo(spec), n, method, newton), spec.order.lambda());
}

}  // namespace ttvp

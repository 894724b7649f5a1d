#include "ttvp/transform.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "ttvp/errors.hpp"
#include "ttvp/special.hpp"

namespace ttvp {

void CaputoIvpSpec::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
    if (!g) throw InvalidArgument("Caputo right-hand side is empty");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidArgument("horizon must be positive");
    if (!std::isfinite(u0)) throw InvalidArgument("initial value must be finite");
}

CaputoIvpSpec to_caputo(const IvpSpec& spec) {
    spec.validate();
    const double lambda = spec.order.lambda();
    ScalarField f = spec.f.eval;
    return CaputoIvpSpec{
        spec.order.alpha(),
        [f, lambda](double s, double u) { return std::exp(lambda * s) * f(s, std::exp(-lambda * s) * u); },
        spec.y0,
        spec.horizon,
    };
}

Trajectory from_caputo(const Trajectory& u_traj, double lambda) {
    const auto u = u_traj.values();
    std::vector<double> y(u.size());
    for (int i = 0; i < u_traj.size(); ++i) {
        y[static_cast<std::size_t>(i)] = std::exp(-lambda * u_traj.grid().node(i)) * u[static_cast<std::size_t>(i)];
    }
    return Trajectory(u_traj.grid(), std::move(y));
}

namespace {

// Neumaier-compensated accumulator.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + carry; }
};

}  // namespace

double tempered_integral(const UniformGrid& grid, std::span<const double> samples,
                         const TemperedOrder& order, int t_index) {
    if (samples.size() != static_cast<std::size_t>(grid.count()) + 1) {
        throw InvalidArgument("tempered_integral: sample count does not match grid");
    }
    if (t_index < 0 || t_index > grid.count()) {
        throw OutOfRange("tempered_integral: node index " + std::to_string(t_index) + " out of range");
    }
    if (t_index == 0) return 0.0;
    const double alpha = order.alpha();
    const double lambda = order.lambda();
    const double h = grid.step();
    const double tk = grid.node(t_index);

    // Panel [t_j, t_{j+1}] at distance m = k - j (in steps) from the target.
    // With sigma = t_k - s the hat-function moments are
    //   M0 = int sigma^{a-1} dsigma,  M1 = int sigma^{a-1} (d_j - sigma) dsigma
    // over [(m-1)h, mh]; left weight = M0 - M1/h, right weight = M1/h.
    const double ha = std::pow(h, alpha);
    CompensatedSum acc;
    for (int j = 0; j < t_index; ++j) {
        const double m = static_cast<double>(t_index - j);
        const double pa_hi = std::pow(m, alpha);
        const double pa_lo = std::pow(m - 1.0, alpha);
        const double m0 = (pa_hi - pa_lo) / alpha;
        const double m1 = m * m0 - (m * pa_hi - (m - 1.0) * pa_lo) / (alpha + 1.0);
        const double w_left = ha * (m0 - m1);
        const double w_right = ha * m1;
        const double x_left = std::exp(-lambda * (tk - grid.node(j))) * samples[static_cast<std::size_t>(j)];
        const double x_right =
            std::exp(-lambda * (tk - grid.node(j + 1))) * samples[static_cast<std::size_t>(j + 1)];
        acc.add(w_left * x_left);
        acc.add(w_right * x_right);
    }
    return acc.value() / gamma_fn(alpha);
}

double tempered_derivative_l1(const Trajectory& y_traj, const TemperedOrder& order, int t_index) {
    const UniformGrid& grid = y_traj.grid();
    if (t_index < 1 || t_index > grid.count()) {
        throw OutOfRange("tempered_derivative_l1: node index must lie in [1, N], got " +
                         std::to_string(t_index));
    }
    const double alpha = order.alpha();
    const double lambda = order.lambda();
    std::vector<double> u(static_cast<std::size_t>(t_index) + 1);
    for (int i = 0; i <= t_index; ++i) u[static_cast<std::size_t>(i)] = std::exp(lambda * grid.node(i)) * y_traj[i];
    double sum = 0.0;
    for (int j = 0; j < t_index; ++j) {
        const double m = static_cast<double>(t_index - 1 - j);
        const double b = std::pow(m + 1.0, 1.0 - alpha) - std::pow(m, 1.0 - alpha);
        sum += b * (u[static_cast<std::size_t>(j) + 1] - u[static_cast<std::size_t>(j)]);
    }
    const double scale = std::pow(grid.step(), -alpha) / gamma_fn(2.0 - alpha);
    return std::exp(-lambda * grid.node(t_index)) * scale * sum;
}

double volterra_residual(const Trajectory& y_traj, const IvpSpec& spec) {
    spec.validate();
    const UniformGrid& grid = y_traj.grid();
    if (std::abs(grid.node(grid.count()) - spec.horizon) > 1e-12 * spec.horizon) {
        throw InvalidArgument("volterra_residual: trajectory does not span the IVP horizon");
    }
    const double lambda = spec.order.lambda();
    std::vector<double> fs(static_cast<std::size_t>(y_traj.size()));
    for (int i = 0; i < y_traj.size(); ++i) fs[static_cast<std::size_t>(i)] = spec.f(grid.node(i), y_traj[i]);
    double worst = 0.0;
    for (int k = 0; k <= grid.count(); ++k) {
        const double free_part = spec.y0 * std::exp(-lambda * grid.node(k));
        const double integral = tempered_integral(grid, fs, spec.order, k);
        worst = std::max(worst, std::abs(y_traj[k] - free_part - integral));
    }
    return worst;
}

}  // namespace ttvp

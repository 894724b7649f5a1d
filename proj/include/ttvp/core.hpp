#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace ttvp {

/// Order pair (alpha, lambda) of the tempered Caputo derivative.
/// 0 < alpha < 1 and lambda >= 0.
class TemperedOrder {
public:
    TemperedOrder(double alpha, double lambda);

    double alpha() const noexcept { return alpha_; }
    double lambda() const noexcept { return lambda_; }

private:
    double alpha_;
    double lambda_;
};

using ScalarField = std::function<double(double t, double y)>;
using TimeFunction = std::function<double(double t)>;

/// Right-hand side f(t, y) plus whatever is known about it.
struct RhsFunction {
    ScalarField eval;
    std::optional<double> lipschitz_estimate;
    std::optional<TimeFunction> exact_solution;
    /// Supremum of |f| on the working rectangle, if known.
    std::optional<double> sup_estimate;

    double operator()(double t, double y) const { return eval(t, y); }
};

/// D^{alpha,lambda} y = f(t, y), y(0) = y0 on [0, horizon].
struct IvpSpec {
    TemperedOrder order;
    RhsFunction f;
    double y0;
    double horizon;

    void validate() const;
};

/// D^{alpha,lambda} y = f(t, y) with e^{lambda a} y(a) = ya, continued to horizon >= a.
struct TvpSpec {
    TemperedOrder order;
    RhsFunction f;
    double a;
    double ya;  // weighted terminal value
    double horizon;

    void validate() const;
    /// Unweighted target y(a) = e^{-lambda a} ya.
    double target_value() const;
};

class UniformGrid {
public:
    UniformGrid(double t_end, int count);

    double step() const noexcept { return step_; }
    int count() const noexcept { return count_; }
    double t_end() const noexcept { return t_end_; }
    double node(int i) const noexcept { return static_cast<double>(i) * step_; }
    std::vector<double> nodes() const;

    /// Index of the node at time t, if t coincides with one to within round-off.
    std::optional<int> index_of(double t) const;

private:
    double t_end_;
    double step_;
    int count_;
};

UniformGrid build_grid(double t_end, int n);

class Trajectory {
public:
    Trajectory(UniformGrid grid, std::vector<double> values);

    const UniformGrid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    int size() const noexcept { return static_cast<int>(values_.size()); }

    /// Piecewise-linear read-out; exact at nodes.
    double value_at(double t) const;

private:
    UniformGrid grid_;
    std::vector<double> values_;
};

inline double trajectory_value_at(const Trajectory& traj, double t) { return traj.value_at(t); }

}  // namespace ttvp

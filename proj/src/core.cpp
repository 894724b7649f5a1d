#include "ttvp/core.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ttvp/errors.hpp"

namespace ttvp {

TemperedOrder::TemperedOrder(double alpha, double lambda) : alpha_(alpha), lambda_(lambda) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidArgument("alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw InvalidArgument("lambda must be finite and nonnegative, got " + std::to_string(lambda));
    }
}

void IvpSpec::validate() const {
    if (!f.eval) throw InvalidArgument("IVP right-hand side is empty");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidArgument("IVP horizon must be positive");
    if (!std::isfinite(y0)) throw InvalidArgument("IVP initial value must be finite");
}

void TvpSpec::validate() const {
    if (!f.eval) throw InvalidArgument("TVP right-hand side is empty");
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("terminal time a must be positive");
    if (!(horizon >= a) || !std::isfinite(horizon)) throw InvalidArgument("horizon must satisfy horizon >= a");
    if (!std::isfinite(ya)) throw InvalidArgument("terminal value must be finite");
}

double TvpSpec::target_value() const { return std::exp(-order.lambda() * a) * ya; }

UniformGrid::UniformGrid(double t_end, int count) : t_end_(t_end), step_(0.0), count_(count) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw InvalidArgument("grid end time must be positive, got " + std::to_string(t_end));
    }
    if (count < 1) throw InvalidArgument("grid step count must be >= 1, got " + std::to_string(count));
    step_ = t_end / static_cast<double>(count);
}

std::vector<double> UniformGrid::nodes() const {
    std::vector<double> t(static_cast<std::size_t>(count_) + 1);
    for (int i = 0; i <= count_; ++i) t[static_cast<std::size_t>(i)] = node(i);
    return t;
}

std::optional<int> UniformGrid::index_of(double t) const {
    const double x = t / step_;
    const double r = std::round(x);
    if (r < 0.0 || r > count_) return std::nullopt;
    if (std::abs(x - r) > 1e-9) return std::nullopt;
    return static_cast<int>(r);
}

UniformGrid build_grid(double t_end, int n) { return UniformGrid(t_end, n); }

Trajectory::Trajectory(UniformGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != static_cast<std::size_t>(grid_.count()) + 1) {
        throw InvalidArgument("trajectory needs count+1 values, got " + std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw InvalidArgument("trajectory value " + std::to_string(i) + " is not finite");
        }
    }
}

double Trajectory::value_at(double t) const {
    const double h = grid_.step();
    const double end = grid_.node(grid_.count());
    if (!(t >= 0.0) || t > end * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())) {
        throw OutOfRange("time " + std::to_string(t) + " outside trajectory range [0, " +
                         std::to_string(end) + "]");
    }
    if (auto idx = grid_.index_of(t); idx && grid_.node(*idx) == t) return values_[static_cast<std::size_t>(*idx)];
    int i = static_cast<int>(std::floor(t / h));
    if (i >= grid_.count()) i = grid_.count() - 1;
    const double w = (t - grid_.node(i)) / h;
    const auto k = static_cast<std::size_t>(i);
    return (1.0 - w) * values_[k] + w * values_[k + 1];
}

}  // namespace ttvp

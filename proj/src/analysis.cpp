#include "ttvp/analysis.hpp"

#include <cmath>
#include <vector>

#include "ttvp/errors.hpp"
#include "ttvp/special.hpp"

namespace ttvp {

namespace {

// 2 a^alpha e^{lambda a} / Gamma(alpha + 1)
double amplification(double a, const TemperedOrder& order) {
    if (!(a > 0.0)) throw InvalidArgument("terminal time a must be positive");
    return 2.0 * std::pow(a, order.alpha()) * std::exp(order.lambda() * a) / gamma_fn(order.alpha() + 1.0);
}

constexpr int kLattice = 201;

}  // namespace

double gamma_bound(double a, const TemperedOrder& order, double f_sup) {
    if (!(f_sup >= 0.0)) throw InvalidArgument("sup norm of f must be nonnegative");
    return amplification(a, order) * f_sup;
}

double lipschitz_threshold(double a, const TemperedOrder& order) { return 1.0 / amplification(a, order); }

double beta_constant(double a, const TemperedOrder& order, double lipschitz) {
    if (!(lipschitz >= 0.0)) throw InvalidArgument("Lipschitz constant must be nonnegative");
    return 1.0 - lipschitz * amplification(a, order);
}

double dependence_bound_terminal(double delta_ya, double beta) {
    if (!(beta > 0.0)) throw NoContractionError(beta);
    return std::abs(delta_ya) / beta;
}

double dependence_bound_rhs(double f_dev, double a, const TemperedOrder& order, double beta) {
    if (!(beta > 0.0)) throw NoContractionError(beta);
    if (!(f_dev >= 0.0)) throw InvalidArgument("f deviation must be nonnegative");
    return amplification(a, order) * f_dev / beta;
}

double dependence_rate_check(std::span<const std::pair<double, double>> observations) {
    if (observations.size() < 2) throw InvalidArgument("rate check needs at least two observations");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [eps, dev] : observations) {
        if (!(eps > 0.0) || !(dev > 0.0)) throw InvalidArgument("rate check needs positive eps and deviations");
        const double x = std::log(eps);
        const double y = std::log(dev);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(observations.size());
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) <= 1e-300) throw InvalidArgument("rate check needs distinct eps values");
    return (n * sxy - sx * sy) / denom;
}

WellPosednessReport assess_well_posedness(const TvpSpec& tvp) {
    tvp.validate();
    const double a = tvp.a;
    const double centre = tvp.target_value();
    const double amp = amplification(a, tvp.order);

    auto lattice_sup = [&](double gamma) {
        double sup = 0.0;
        for (int i = 0; i < kLattice; ++i) {
            const double t = a * i / (kLattice - 1);
            for (int j = 0; j < kLattice; ++j) {
                const double y = centre - gamma + 2.0 * gamma * j / (kLattice - 1);
                sup = std::max(sup, std::abs(tvp.f(t, y)));
            }
        }
        return sup;
    };

    double f_sup = 0.0;
    const bool sup_estimated = !tvp.f.sup_estimate.has_value();
    if (sup_estimated) {
        double gamma = 0.0;
        for (int iter = 0; iter < 8; ++iter) {
            f_sup = lattice_sup(gamma);
            const double next = amp * f_sup;
            if (std::abs(next - gamma) <= 1e-12 * std::max(1.0, next)) break;
            gamma = next;
        }
    } else {
        f_sup = *tvp.f.sup_estimate;
    }
    const double gamma = amp * f_sup;

    double lip = 0.0;
    const bool lip_estimated = !tvp.f.lipschitz_estimate.has_value();
    if (lip_estimated) {
        // Largest difference quotient between neighbouring lattice rows.
        const double dy = 2.0 * gamma / (kLattice - 1);
        if (dy > 0.0) {
            for (int i = 0; i < kLattice; ++i) {
                const double t = a * i / (kLattice - 1);
                double prev = tvp.f(t, centre - gamma);
                for (int j = 1; j < kLattice; ++j) {
                    const double cur = tvp.f(t, centre - gamma + dy * j);
                    lip = std::max(lip, std::abs(cur - prev) / dy);
                    prev = cur;
                }
            }
        }
    } else {
        lip = *tvp.f.lipschitz_estimate;
    }

    const double threshold = 1.0 / amp;
    const double beta = 1.0 - lip * amp;
    return WellPosednessReport{
        gamma, lip, threshold, beta, beta > 0.0, DomainRect{0.0, a, centre - gamma, centre + gamma},
        f_sup, sup_estimated, lip_estimated,
    };
}

}  // namespace ttvp

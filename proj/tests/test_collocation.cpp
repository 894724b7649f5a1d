#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "ttvp/errors.hpp"
#include "ttvp/experiments.hpp"
#include "ttvp/solvers.hpp"
#include "ttvp/special.hpp"

using namespace ttvp;

namespace {

/// int_lo^hi (tau - s)^{alpha-1} psi_p(s) ds by double-exponential quadrature,
/// split at the panel's interior so both end singularities are handled.
double moment_oracle(double alpha, const UniformGrid& grid, int panel, int p, double tau) {
    const double lo = grid.node(panel);
    const double hi = std::min(grid.node(panel + 1), tau);
    boost::math::quadrature::tanh_sinh<double> ts;
    // xc is hi - s on the right half of the interval, which keeps tau - s accurate near tau.
    auto f = [&](double s, double xc) {
        const double dist_right = xc > 0.0 ? xc : hi - s;
        return std::pow((tau - hi) + dist_right, alpha - 1.0) * collocation_basis(grid, panel, p, s);
    };
    return ts.integrate(f, lo, hi, 1e-14);
}

}  // namespace

TEST_CASE("collocation basis values") {
    const UniformGrid g = build_grid(1.0, 10);
    for (int k : {0, 3, 9}) {
        CHECK(collocation_basis(g, k, 0, g.node(k) + 0.03) == 1.0);
        for (int p = 1; p <= 3; ++p) {
            CHECK(collocation_basis(g, k, p, g.node(k)) == doctest::Approx(0.0));
            CHECK(collocation_basis(g, k, p, g.node(k + 1)) == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("collocation moments agree with double-exponential quadrature") {
    const UniformGrid g = build_grid(1.0, 20);
    for (double alpha : {0.25, 0.5, 2.0 / 3.0}) {
        for (int p = 0; p <= 3; ++p) {
            struct Target {
                int panel;
                double tau;
            };
            const std::vector<Target> targets{
                {0, 0.05 / 3.0},            // inside the first panel
                {0, 0.05},                  // first panel, singular end
                {0, 0.40},                  // first panel as history
                {5, 0.25 + 0.05 * 0.25},    // interior panel, target inside
                {5, 0.30},                  // interior panel, singular end
                {5, 0.30 + 1e-3},           // nearly singular history
                {5, 0.95}};                 // far history
            for (const auto& tg : targets) {
                CAPTURE(alpha);
                CAPTURE(p);
                CAPTURE(tg.panel);
                CAPTURE(tg.tau);
                const double got = collocation_moment(alpha, g, tg.panel, p, tg.tau);
                const double ref = moment_oracle(alpha, g, tg.panel, p, tg.tau);
                CHECK(std::abs(got - ref) <= 1e-11 * std::max(1.0, std::abs(ref)));
            }
        }
    }
}

TEST_CASE("collocation method validation") {
    CHECK_NOTHROW(NonpolyCollocation::with_defaults(1).validate());
    CHECK_NOTHROW(NonpolyCollocation::with_defaults(2).validate());
    CHECK_THROWS_AS(NonpolyCollocation::with_defaults(3), InvalidArgument);
    NonpolyCollocation bad{1, {1.0, 0.5}};
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    NonpolyCollocation wrong_count{2, {0.5, 1.0}};
    CHECK_THROWS_AS(wrong_count.validate(), InvalidArgument);
    NonpolyCollocation beyond{1, {0.5, 1.5}};
    CHECK_THROWS_AS(beyond.validate(), InvalidArgument);
    NonpolyCollocation zero{1, {0.0, 1.0}};
    CHECK_THROWS_AS(zero.validate(), InvalidArgument);
}

TEST_CASE("order-2 space reproduces the three-halves power solution") {
    const TvpSpec tvp = registry_build(Example::Three, 0.5, 2.0);
    const IvpSpec s{tvp.order, tvp.f, 0.0, 1.0};
    const Trajectory y = solve_ivp_collocation(s, 20, NonpolyCollocation::with_defaults(2));
    double worst = 0.0;
    for (int i = 0; i <= 20; ++i) worst = std::max(worst, std::abs(y[i] - (*tvp.f.exact_solution)(y.grid().node(i))));
    CHECK(worst <= 1e-9);
}

TEST_CASE("order-1 space matches the reference magnitudes for the three-halves power solution") {
    const TvpSpec tvp = registry_build(Example::Three, 0.5, 2.0);
    const IvpSpec s{tvp.order, tvp.f, 0.0, 1.0};
    const Trajectory y = solve_ivp_collocation(s, 20, NonpolyCollocation::with_defaults(1));
    const auto& exact = *tvp.f.exact_solution;
    CHECK(std::abs(y[20] - exact(1.0)) == doctest::Approx(6.302e-6).epsilon(2e-3));
}

TEST_CASE("reused solver equals a fresh solve and supports prefixes") {
    const TvpSpec tvp = registry_build(Example::Two, 0.5, 2.0);
    const IvpSpec s{tvp.order, tvp.f, 0.01, 1.0};
    const auto m = NonpolyCollocation::with_defaults(1);
    const Trajectory fresh = solve_ivp_collocation(s, 40, m);
    const CaputoIvpSpec c = to_caputo(s);
    const CollocationSolver solver(0.5, build_grid(1.0, 40), m);
    const Trajectory u = solver.solve(c.g, c.u0);
    const Trajectory again = from_caputo(u, 2.0);
    for (int i = 0; i <= 40; ++i) CHECK(again[i] == fresh[i]);
    const Trajectory half = solver.solve(c.g, c.u0, NewtonConfig{}, 20);
    REQUIRE(half.size() == 21);
    for (int i = 0; i <= 20; ++i) CHECK(half[i] == u[i]);
}

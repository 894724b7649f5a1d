#include <doctest.h>

#include <cmath>
#include <string>
#include <optional>

#include "ttvp/errors.hpp"
#include "ttvp/experiments.hpp"
#include "ttvp/solvers.hpp"
#include "ttvp/special.hpp"

using namespace ttvp;

namespace {

RhsFunction rhs(ScalarField f) { return RhsFunction{std::move(f), {}, {}, {}}; }

std::vector<MethodChoice> all_methods() {
    return {BackwardDifference{}, PredictorCorrector{}, NonpolyCollocation::with_defaults(1),
            NonpolyCollocation::with_defaults(2)};
}

std::string method_label(const MethodChoice& m) {
    if (std::holds_alternative<BackwardDifference>(m)) return "bdq";
    if (std::holds_alternative<PredictorCorrector>(m)) return "abm";
    return "colloc" + std::to_string(std::get<NonpolyCollocation>(m).order_m);
}

double max_error(const Trajectory& y, const TimeFunction& exact) {
    double e = 0.0;
    for (int i = 0; i < y.size(); ++i) e = std::max(e, std::abs(y[i] - exact(y.grid().node(i))));
    return e;
}

/// Fitted order from IVP solves started at the exact initial value.
double ivp_order(Example ex, double alpha, const MethodChoice& m, int n0, int n1) {
    const TvpSpec tvp = registry_build(ex, alpha, 2.0);
    const TimeFunction& exact = *tvp.f.exact_solution;
    const IvpSpec ivp{tvp.order, tvp.f, exact(0.0), 1.0};
    const double e0 = max_error(solve_ivp(ivp, n0, m), exact);
    const double e1 = max_error(solve_ivp(ivp, n1, m), exact);
    return std::log2(e0 / e1) / std::log2(static_cast<double>(n1) / n0);
}

}  // namespace

TEST_CASE("predictor weights") {
    for (int n : {0, 3, 10}) {
        for (int j = 0; j <= n; ++j) CHECK(abm_predictor_weight(1.0, n, j, 0.1) == doctest::Approx(0.1).epsilon(1e-14));
    }
    CHECK(abm_predictor_weight(0.5, 0, 0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    for (double alpha : {0.25, 0.5, 0.8}) {
        const double h = 0.05;
        const int n = 17;
        double s = 0.0;
        for (int j = 0; j <= n; ++j) s += abm_predictor_weight(alpha, n, j, h);
        CHECK(s == doctest::Approx(std::pow(h, alpha) * std::pow(n + 1.0, alpha) / alpha).epsilon(1e-13));
    }
    CHECK_THROWS_AS(abm_predictor_weight(0.5, 3, 4, 1.0), OutOfRange);
}

TEST_CASE("corrector weights") {
    const double h = 0.2;
    CHECK(abm_corrector_weight(1.0, 0, 0, h) == doctest::Approx(h / 2).epsilon(1e-14));
    CHECK(abm_corrector_weight(1.0, 0, 1, h) == doctest::Approx(h / 2).epsilon(1e-14));
    CHECK(abm_corrector_weight(1.0, 5, 0, h) == doctest::Approx(h / 2).epsilon(1e-14));
    for (int j = 1; j <= 5; ++j) CHECK(abm_corrector_weight(1.0, 5, j, h) == doctest::Approx(h).epsilon(1e-14));
    CHECK(abm_corrector_weight(1.0, 5, 6, h) == doctest::Approx(h / 2).epsilon(1e-14));

    CHECK(abm_corrector_weight(0.5, 0, 0, 1.0) == doctest::Approx(std::beta(1.0, 1.5)).epsilon(1e-15));
    CHECK(abm_corrector_weight(0.5, 0, 1, 1.0) == doctest::Approx(std::beta(2.0, 0.5)).epsilon(1e-15));
    CHECK_THROWS_AS(abm_corrector_weight(0.5, 3, 5, 1.0), OutOfRange);
}

TEST_CASE("corrector weights are nonnegative") {
    bool ok = true;
    for (int ia = 1; ia <= 9; ++ia) {
        const double alpha = 0.1 * ia;
        for (int n = 0; n <= 512 && ok; ++n) {
            for (int j = 0; j <= n + 1; ++j) {
                if (abm_corrector_weight(alpha, n, j, 1.0) < 0.0) {
                    ok = false;
                    break;
                }
            }
        }
    }
    CHECK(ok);
}

TEST_CASE("zero right-hand side gives the tempered constant") {
    const double lambda = 2.0;
    const double y0 = 0.8;
    const IvpSpec s{TemperedOrder(0.5, lambda), rhs([](double, double) { return 0.0; }), y0, 1.0};
    for (const auto& m : all_methods()) {
        CAPTURE(method_label(m));
        const Trajectory y = solve_ivp(s, 25, m);
        for (int i = 0; i <= 25; ++i) CHECK(y[i] == doctest::Approx(y0 * std::exp(-lambda * y.grid().node(i))).epsilon(1e-14));
    }
}

TEST_CASE("initial node is reproduced exactly and the grid has step horizon/n") {
    const TvpSpec tvp = registry_build(Example::Two, 0.5, 2.0);
    const IvpSpec s{tvp.order, tvp.f, 0.123456789, 1.0};
    for (const auto& m : all_methods()) {
        CAPTURE(method_label(m));
        const Trajectory y = solve_ivp(s, 16, m);
        CHECK(y[0] == 0.123456789);
        CHECK(y.grid().step() == doctest::Approx(1.0 / 16).epsilon(1e-15));
        CHECK(y.size() == 17);
    }
}

TEST_CASE("dispatch matches the specific solvers") {
    const TvpSpec tvp = registry_build(Example::Two, 0.4, 2.0);
    const IvpSpec s{tvp.order, tvp.f, 0.01, 1.0};
    const auto same = [](const Trajectory& a, const Trajectory& b) {
        for (int i = 0; i < a.size(); ++i) {
            if (a[i] != b[i]) return false;
        }
        return true;
    };
    CHECK(same(solve_ivp(s, 20, BackwardDifference{}), solve_ivp_bdq(s, 20)));
    CHECK(same(solve_ivp(s, 20, PredictorCorrector{}), solve_ivp_abm(s, 20)));
    const auto m = NonpolyCollocation::with_defaults(1);
    CHECK(same(solve_ivp(s, 20, m), solve_ivp_collocation(s, 20, m)));
}

TEST_CASE("lambda = 0: tempered and plain Caputo paths agree") {
    for (Example ex : {Example::One, Example::Two, Example::Three}) {
        const TvpSpec tvp = registry_build(ex, 0.5, 0.0);
        const double y0 = (*tvp.f.exact_solution)(0.0);
        const IvpSpec s{tvp.order, tvp.f, y0, 1.0};
        const CaputoIvpSpec c{0.5, tvp.f.eval, y0, 1.0};
        for (const auto& m : all_methods()) {
            CAPTURE(method_label(m));
            std::string fa;
            std::string fb;
            std::optional<Trajectory> a;
            std::optional<Trajectory> b;
            try {
                a = solve_ivp(s, 80, m);
            } catch (const NumericalError& e) {
                fa = e.what();
            }
            try {
                b = solve_caputo(c, 80, m);
            } catch (const NumericalError& e) {
                fb = e.what();
            }
            // The unstable quadratic problem has no implicit step root late on; both paths must agree on that.
            REQUIRE(a.has_value() == b.has_value());
            if (!a) {
                CHECK(fa == fb);
                continue;
            }
            double worst = 0.0;
            for (int i = 0; i <= 80; ++i) worst = std::max(worst, std::abs((*a)[i] - (*b)[i]));
            CHECK(worst <= 1e-14);
        }
    }
}

TEST_CASE("Newton and a direct linear solve agree on the linear example") {
    // g(s, u) = g(s, 0) + u (g(s, 1) - g(s, 0)) for the linear registry problem.
    const double alpha = 0.5;
    const TvpSpec tvp = registry_build(Example::One, alpha, 2.0);
    const IvpSpec s{tvp.order, tvp.f, -0.002, 1.0};
    const CaputoIvpSpec c = to_caputo(s);
    const int n = 64;
    const double h = 1.0 / n;
    const double k = std::pow(h, -alpha) / std::tgamma(2.0 - alpha);
    std::vector<double> b(n + 1);
    for (int m = 0; m <= n; ++m) b[static_cast<std::size_t>(m)] = std::pow(m + 1.0, 1.0 - alpha) - std::pow(m, 1.0 - alpha);
    std::vector<double> u(n + 1);
    u[0] = s.y0;
    for (int i = 1; i <= n; ++i) {
        const double t = i * h;
        double hist = 0.0;
        for (int j = 0; j + 1 < i; ++j) hist += b[static_cast<std::size_t>(i - 1 - j)] * (u[static_cast<std::size_t>(j + 1)] - u[static_cast<std::size_t>(j)]);
        const double g0 = c.g(t, 0.0);
        const double slope = c.g(t, 1.0) - g0;
        u[static_cast<std::size_t>(i)] = (g0 - k * hist + k * u[static_cast<std::size_t>(i - 1)]) / (k - slope);
    }
    const Trajectory newton = solve_ivp_bdq(s, n, NewtonConfig{1e-12, 50});
    for (int i = 0; i <= n; ++i) {
        const double direct = std::exp(-2.0 * i * h) * u[static_cast<std::size_t>(i)];
        CHECK(std::abs(newton[i] - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("convergence orders from the exact initial value") {
    for (double alpha : {0.25, 0.5, 2.0 / 3.0}) {
        CAPTURE(alpha);
        CHECK(ivp_order(Example::One, alpha, BackwardDifference{}, 320, 640) == doctest::Approx(2.0 - alpha).epsilon(0.1 / (2.0 - alpha)));
        CHECK(ivp_order(Example::Two, alpha, PredictorCorrector{}, 160, 320) == doctest::Approx(1.0 + alpha).epsilon(0.1 / (1.0 + alpha)));
    }
    CHECK(ivp_order(Example::Three, 0.5, BackwardDifference{}, 160, 320) == doctest::Approx(1.5).epsilon(0.1 / 1.5));
    CHECK(ivp_order(Example::Three, 0.5, NonpolyCollocation::with_defaults(1), 160, 320) == doctest::Approx(1.5).epsilon(0.1 / 1.5));
}

TEST_CASE("Volterra residual of solver output decreases under refinement") {
    struct Case {
        Example ex;
        MethodChoice m;
        double order;
    };
    const double alpha = 0.5;
    const std::vector<Case> cases{{Example::One, BackwardDifference{}, 2.0 - alpha},
                                  {Example::Two, PredictorCorrector{}, 1.0 + alpha},
                                  {Example::Three, BackwardDifference{}, 1.5},
                                  {Example::Three, NonpolyCollocation::with_defaults(1), 1.5}};
    for (const auto& c : cases) {
        CAPTURE(method_label(c.m));
        CAPTURE(static_cast<int>(c.ex));
        const TvpSpec tvp = registry_build(c.ex, alpha, 2.0);
        const IvpSpec s{tvp.order, tvp.f, 0.0, 1.0};
        const double r0 = volterra_residual(solve_ivp(s, 80, c.m), s);
        const double r1 = volterra_residual(solve_ivp(s, 160, c.m), s);
        const double r2 = volterra_residual(solve_ivp(s, 320, c.m), s);
        CHECK(r1 < r0);
        CHECK(r2 < r1);
        CHECK(std::log2(r1 / r2) >= c.order - 0.15);
    }
}

TEST_CASE("solutions from ordered initial values never cross") {
    const TvpSpec tvp = registry_build(Example::Four, 0.5, 2.0);
    for (int n : {16, 64, 256, 1024}) {
        for (int pair = 0; pair < 20; pair += (n >= 256 ? 5 : 1)) {
            const double y0 = -2.0 + 0.2 * pair;
            const Trajectory lo = solve_ivp(IvpSpec{tvp.order, tvp.f, y0, tvp.horizon}, n, PredictorCorrector{});
            const Trajectory hi = solve_ivp(IvpSpec{tvp.order, tvp.f, y0 + 0.1, tvp.horizon}, n, PredictorCorrector{});
            bool ordered = true;
            for (int i = 0; i <= n; ++i) ordered = ordered && lo[i] < hi[i];
            CHECK(ordered);
        }
    }
}

TEST_CASE("solver failures are reported") {
    const IvpSpec blowup{TemperedOrder(0.5, 0.0), rhs([](double, double y) { return y * y * y; }), 50.0, 1.0};
    CHECK_THROWS_AS(solve_ivp_abm(blowup, 40), DivergenceError);
    try {
        solve_ivp_abm(blowup, 40);
    } catch (const DivergenceError& e) {
        CHECK(e.step() >= 1);
        CHECK(std::isfinite(e.last_finite()));
    }

    const IvpSpec stiff{TemperedOrder(0.5, 0.0), rhs([](double, double y) { return std::exp(y); }), 0.0, 1.0};
    CHECK_THROWS_AS(solve_ivp_bdq(stiff, 10, NewtonConfig{1e-300, 1}), ImplicitStepError);

    CHECK_THROWS_AS(NewtonConfig({0.0, 5}).validate(), InvalidArgument);
    CHECK_THROWS_AS(NewtonConfig({1e-10, 0}).validate(), InvalidArgument);
    const IvpSpec ok{TemperedOrder(0.5, 0.0), rhs([](double, double) { return 0.0; }), 0.0, 1.0};
    CHECK_THROWS_AS(solve_ivp_abm(ok, 0), InvalidArgument);
}

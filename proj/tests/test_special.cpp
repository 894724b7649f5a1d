#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ttvp/errors.hpp"
#include "ttvp/special.hpp"

using namespace ttvp;

TEST_CASE("gamma_fn agrees with the standard library") {
    double worst = 0.0;
    for (int i = 1; i <= 6000; ++i) {
        const double x = i * 1e-3;
        const double ref = std::tgamma(x);
        worst = std::max(worst, std::abs(gamma_fn(x) - ref) / std::abs(ref));
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("gamma_fn special values") {
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-15));
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-15));
    CHECK(gamma_fn(1.5) == doctest::Approx(0.5 * std::sqrt(std::numbers::pi)).epsilon(1e-15));
    CHECK(gamma_fn(-0.5) == doctest::Approx(-2.0 * std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK_THROWS_AS(gamma_fn(0.0), InvalidArgument);
    CHECK_THROWS_AS(gamma_fn(-2.0), InvalidArgument);
}

TEST_CASE("beta_fn") {
    CHECK(beta_fn(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(beta_fn(0.5, 0.5) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
    for (double a : {0.25, 0.5, 1.7, 3.0}) {
        for (double b : {0.3, 1.0, 2.5}) CHECK(beta_fn(a, b) == doctest::Approx(std::beta(a, b)).epsilon(1e-13));
    }
}

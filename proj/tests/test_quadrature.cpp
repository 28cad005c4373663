#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "randopt/quadrature.hpp"

using randopt::quad::integrate;

TEST_CASE("polynomials are integrated exactly") {
    auto r = integrate([](double x) { return x * x * x - 2 * x + 1; }, 0.0, 2.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(4.0 - 4.0 + 2.0).epsilon(1e-14));
}

TEST_CASE("smooth transcendental integrands") {
    auto r = integrate([](double x) { return std::exp(-x); }, 0.0, 30.0);
    CHECK(std::abs(r.value - (1.0 - std::exp(-30.0))) < 1e-13);
    auto s = integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
    CHECK(std::abs(s.value - 2.0) < 1e-13);
}

TEST_CASE("breakpoints handle kinks and jumps") {
    // |x - 0.3| + step at 0.7
    auto f = [](double x) { return std::abs(x - 0.3) + (x > 0.7 ? 1.0 : 0.0); };
    const std::vector<double> br{0.3, 0.7};
    auto r = integrate(f, 0.0, 1.0, br);
    const double exact = 0.3 * 0.3 / 2 + 0.7 * 0.7 / 2 + 0.3;
    CHECK(std::abs(r.value - exact) < 1e-13);
}

TEST_CASE("integrable endpoint singularity converges by adaptivity") {
    auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {}, {1e-10, 1e-15, 4000});
    CHECK(std::abs(r.value - 2.0) < 1e-8);
}

TEST_CASE("degenerate interval is zero") {
    CHECK(integrate([](double) { return 1.0; }, 1.0, 1.0).value == 0.0);
}

TEST_CASE("clip_breaks keeps sorted interior points only") {
    auto b = randopt::quad::clip_breaks({0.5, -1.0, 0.2, 0.5, 1.0, 3.0}, 0.0, 1.0);
    REQUIRE(b.size() == 2);
    CHECK(b[0] == 0.2);
    CHECK(b[1] == 0.5);
}

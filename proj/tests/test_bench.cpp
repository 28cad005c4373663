#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "randopt/bench.hpp"
#include "randopt/errors.hpp"
#include "randopt/simulation.hpp"

using namespace randopt;

namespace {

const MarketParams kBench{2.0, 1.0};

struct Named {
    std::string name;
    Distribution dist;
};

std::vector<Named> families() {
    return {
        {"uniform", Distribution::uniform(100, 300)},
        {"exponential", Distribution::exponential(0.7)},
        {"lognormal", Distribution::lognormal(0.3, 0.5)},
        {"truncated_normal", Distribution::truncated_normal(2.0, 1.5)},
        {"mixture", Distribution::mixture({{0.6, Distribution::exponential(2.0)}, {0.4, Distribution::uniform(1, 2)}})},
        {"lognormal_upper", Distribution::lognormal(0.0, 1.0).truncated_above(4.0)},
    };
}

}  // namespace

TEST_CASE("market validation") {
    CHECK_NOTHROW(kBench.validate());
    CHECK_THROWS_AS((MarketParams{1.0, 1.0}.validate()), ValidationError);
    CHECK_THROWS_AS((MarketParams{1.0, 0.0}.validate()), ValidationError);
    CHECK_THROWS_AS((MarketParams{2.0, 1.0, 0.5}.validate()), ValidationError);
    CHECK_THROWS_AS((MarketParams{2.0, 1.0, 0.0, 0.1}.validate()), ValidationError);
    CHECK_NOTHROW((MarketParams{2.0, 1.0, 0.0, 0.0, 0.7}.validate()));
    try {
        MarketParams{2.0, 1.0, 0.5}.validate();
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("not yet supported") != std::string::npos);
    }
}

TEST_CASE("expected profit examples") {
    const auto u = Distribution::uniform(0, 1);
    CHECK(std::abs(bench::expected_profit(kBench, u, 0.5) - 0.25) < 1e-15);
    CHECK(bench::expected_profit(kBench, u, 0.0) == 0.0);
    CHECK(std::abs(bench::expected_profit(kBench, u, 1.0)) < 1e-15);
    CHECK_THROWS_AS(bench::expected_profit(kBench, u, -0.1), DomainError);
    // slope -w beyond the support
    const double a = bench::expected_profit(kBench, u, 3.0);
    const double b = bench::expected_profit(kBench, u, 4.0);
    CHECK(std::abs((b - a) + kBench.w) < 1e-12);
}

TEST_CASE("profit variance examples") {
    const auto u = Distribution::uniform(0, 1);
    CHECK(std::abs(bench::profit_variance(kBench, u, 0.5) - 5.0 / 48.0) < 1e-15);
    CHECK(std::abs(bench::profit_variance(kBench, u, 0.5) - 0.1041667) < 1e-6);
    CHECK(bench::profit_variance(kBench, u, 0.0) == 0.0);
    CHECK(bench::profit_variance(kBench, Distribution::uniform(2, 3), 1.0) == 0.0);
    CHECK_THROWS_AS(bench::profit_variance(kBench, u, -1.0), DomainError);
}

TEST_CASE("optimal quantity examples") {
    CHECK(std::abs(bench::optimal_quantity(kBench, Distribution::uniform(0, 1)) - 0.5) < 1e-15);
    CHECK(std::abs(bench::optimal_quantity({10, 2}, Distribution::uniform(100, 300)) - 260) < 1e-10);
    CHECK(std::abs(bench::optimal_quantity({std::numbers::e, 1}, Distribution::exponential(1)) - 1.0) < 1e-12);
}

TEST_CASE("optimal profit examples") {
    CHECK(std::abs(bench::optimal_profit(kBench, Distribution::uniform(0, 1)) - 0.25) < 1e-15);
    CHECK(std::abs(bench::optimal_profit({2, 1.999}, Distribution::uniform(0, 1))) < 1e-6);
    const double e = std::numbers::e;
    CHECK(std::abs(bench::optimal_profit({e, 1}, Distribution::exponential(1)) - (e - 2.0)) < 1e-12);
}

TEST_CASE("optimal profit variance examples") {
    CHECK(std::abs(bench::optimal_profit_variance(kBench, Distribution::uniform(0, 1)) - 0.1041667) < 1e-6);
    CHECK(bench::optimal_profit_variance({2, 1.999999}, Distribution::uniform(0, 1)) < 1e-11);
    const double e = std::numbers::e;
    const MarketParams m{e, 1};
    const auto d = Distribution::exponential(1);
    const double v = bench::optimal_profit_variance(m, d);
    CHECK(std::abs(v - bench::profit_variance(m, d, 1.0)) <= 1e-7 * v);
    // hand-derived: e^2 - 2e - 1
    CHECK(std::abs(v - (e * e - 2 * e - 1)) < 1e-12);
}

TEST_CASE("optimality over a grid around the optimum") {
    const MarketParams m{5.0, 2.0};
    for (const auto& [name, d] : families()) {
        CAPTURE(name);
        const double q = bench::optimal_quantity(m, d);
        const double best = bench::expected_profit(m, d, q);
        for (int i = 0; i <= 40; ++i) {
            const double x = q * (0.8 + 0.4 * i / 40.0);
            CHECK(bench::expected_profit(m, d, x) <= best + 1e-9);
        }
        CHECK(std::abs(d.cdf(q) - m.critical_fractile()) < 1e-9);
    }
}

TEST_CASE("empirical demand: no grid point beats the generalised-inverse order") {
    const MarketParams m{3.0, 1.0};
    const auto d = Distribution::empirical({2, 5, 5, 7, 11, 12});
    const double q = bench::optimal_quantity(m, d);
    const double best = bench::expected_profit(m, d, q);
    for (int i = 0; i <= 1300; ++i) CHECK(bench::expected_profit(m, d, i / 100.0) <= best + 1e-9);
    CHECK(bench::optimal_profit(m, d) == best);
}

TEST_CASE("three forms and both variance formulas agree across random markets") {
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> up(1.0, 20.0);
    std::uniform_real_distribution<double> ur(0.02, 0.98);
    for (const auto& [name, d] : families()) {
        CAPTURE(name);
        for (int k = 0; k < 50; ++k) {
            const double p = up(g);
            const MarketParams m{p, p * ur(g)};
            const auto f = bench::optimal_profit_forms(m, d);
            const double ref = std::abs(f.moment_form);
            CHECK(std::abs(f.margin_form - f.moment_form) <= 1e-7 * ref + 1e-13);
            CHECK(std::abs(f.survival_form - f.moment_form) <= 1e-7 * ref + 1e-13);
            const double q = bench::optimal_quantity(m, d);
            const double direct = bench::profit_variance(m, d, q);
            const double closed = bench::optimal_profit_variance_closed_form(m, d);
            CHECK(std::abs(direct - closed) <= 1e-7 * direct + 1e-13 * p * p * std::max(1.0, q * q));
            CHECK_NOTHROW(bench::optimal_profit(m, d));
            CHECK_NOTHROW(bench::optimal_profit_variance(m, d));
        }
    }
}

TEST_CASE("mean and variance agree with Monte-Carlo at four standard errors") {
    const MarketParams m{4.0, 1.5};
    mc::SimConfig cfg;
    cfg.n_draws = 10'000'000;
    cfg.seed = 99;
    for (const auto& [name, d] : families()) {
        CAPTURE(name);
        for (double frac : {0.3, 1.0 - m.w / m.p}) {
            const double q = d.quantile(frac);
            const auto r = mc::simulate_profit(m, d, DeterministicOrder{q}, cfg);
            CHECK(mc::z_score(bench::expected_profit(m, d, q), r) <= 4.0);
            CHECK(std::abs(bench::profit_variance(m, d, q) - r.variance) <= 4.0 * r.variance_std_error);
        }
    }
}

TEST_CASE("benchmark variance against an independent generator") {
    const auto r = oracle::monte_carlo(
        [](std::mt19937_64& g) {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            return 2.0 * std::min(0.5, u(g)) - 0.5;
        },
        2'000'000, 8);
    CHECK(std::abs(r.mean - 0.25) < 4 * r.std_error);
    CHECK(std::abs(r.variance - bench::profit_variance(kBench, Distribution::uniform(0, 1), 0.5)) < 0.02 * r.variance);
}

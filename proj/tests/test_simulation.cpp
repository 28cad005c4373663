#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "randopt/errors.hpp"
#include "randopt/rng.hpp"
#include "randopt/simulation.hpp"

using namespace randopt;

namespace {

const MarketParams kBench{2.0, 1.0};
const Distribution kU01 = Distribution::uniform(0, 1);

bool bit_equal(const mc::SimReport& a, const mc::SimReport& b) {
    return std::memcmp(&a.mean, &b.mean, sizeof(double)) == 0 &&
           std::memcmp(&a.variance, &b.variance, sizeof(double)) == 0 && a.n == b.n;
}

mc::SimConfig config(std::size_t n, std::uint64_t seed) {
    mc::SimConfig c;
    c.n_draws = n;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("benchmark profit by simulation") {
    const auto r = mc::simulate_profit(kBench, kU01, DeterministicOrder{0.5}, config(10'000'000, 1));
    CHECK(mc::z_score(0.25, r) <= 4.0);
    CHECK(std::abs(r.variance - 0.1041667) < 0.02 * 0.1041667);
    CHECK(r.std_error == doctest::Approx(std::sqrt(r.variance / r.n)).epsilon(1e-15));
    CHECK(r.ci95_lo == doctest::Approx(r.mean - 1.96 * r.std_error).epsilon(1e-15));
    CHECK(r.ci95_hi == doctest::Approx(r.mean + 1.96 * r.std_error).epsilon(1e-15));
}

TEST_CASE("stochastic order by simulation") {
    const auto r = mc::simulate_profit(kBench, kU01, StochasticOrder{kU01}, config(10'000'000, 2));
    CHECK(mc::z_score(1.0 / 6.0, r) <= 4.0);
}

TEST_CASE("zero order is exact") {
    const auto r = mc::simulate_profit(kBench, Distribution::lognormal(0, 1), DeterministicOrder{0.0}, config(1000, 3));
    CHECK(r.mean == 0.0);
    CHECK(r.variance == 0.0);
    CHECK(r.std_error == 0.0);
    CHECK(mc::z_score(0.0, r) == 0.0);
    CHECK(std::isinf(mc::z_score(0.1, r)));
}

TEST_CASE("expected max by simulation") {
    const auto cfg = config(10'000'000, 4);
    CHECK(mc::z_score(2.0 / 3.0, mc::simulate_expected_max(kU01, kU01, cfg)) <= 4.0);
    const auto disjoint = mc::simulate_expected_max(kU01, Distribution::uniform(2, 3), cfg);
    CHECK(mc::z_score(2.5, disjoint) <= 4.0);
    const auto e = Distribution::exponential(1);
    CHECK(mc::z_score(1.5, mc::simulate_expected_max(e, e, cfg)) <= 4.0);
}

TEST_CASE("seed determinism and thread independence") {
    auto cfg = config(300'000, 9);
    cfg.batch_size = 10'000;
    cfg.threads = 1;
    const auto a = mc::simulate_profit(kBench, kU01, StochasticOrder{kU01}, cfg);
    const auto b = mc::simulate_profit(kBench, kU01, StochasticOrder{kU01}, cfg);
    cfg.threads = 3;
    const auto c = mc::simulate_profit(kBench, kU01, StochasticOrder{kU01}, cfg);
    CHECK(bit_equal(a, b));
    CHECK(bit_equal(a, c));
    cfg.seed = 10;
    CHECK_FALSE(bit_equal(a, mc::simulate_profit(kBench, kU01, StochasticOrder{kU01}, cfg)));
}

TEST_CASE("standard error halves when draws quadruple") {
    double ratio_sum = 0.0;
    for (std::uint64_t rep = 0; rep < 10; ++rep) {
        const auto small = mc::simulate_profit(kBench, kU01, DeterministicOrder{0.5}, config(25'000, 100 + rep));
        const auto large = mc::simulate_profit(kBench, kU01, DeterministicOrder{0.5}, config(100'000, 200 + rep));
        ratio_sum += small.std_error / large.std_error;
    }
    CHECK(std::abs(ratio_sum / 10.0 - 2.0) < 0.15 * 2.0);
}

TEST_CASE("one-pass statistics match a two-pass reference") {
    std::mt19937_64 g(12);
    std::lognormal_distribution<double> ln(1.0, 0.8);
    std::vector<double> xs(100'000);
    for (auto& x : xs) x = 1e3 + ln(g);  // offset stresses cancellation

    mc::RunningStats whole;
    for (double x : xs) whole.push(x);
    // batched with merges
    mc::RunningStats merged;
    for (std::size_t start = 0; start < xs.size(); start += 7'919) {
        mc::RunningStats part;
        for (std::size_t i = start; i < std::min(xs.size(), start + 7'919); ++i) part.push(xs[i]);
        merged.merge(part);
    }

    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= xs.size();
    double ss = 0.0;
    double s4 = 0.0;
    for (double x : xs) {
        ss += (x - mean) * (x - mean);
        s4 += std::pow(x - mean, 4);
    }
    const double var = ss / (xs.size() - 1);
    const double m4 = s4 / xs.size();
    for (const auto* s : {&whole, &merged}) {
        CHECK(std::abs(s->mean() - mean) <= 1e-10 * mean);
        CHECK(std::abs(s->variance() - var) <= 1e-10 * var);
        CHECK(std::abs(s->fourth_moment() - m4) <= 1e-8 * m4);
        CHECK(s->count() == xs.size());
    }
}

TEST_CASE("antithetic pairing") {
    auto cfg = config(1'000'000, 21);
    const auto plain = mc::simulate_profit(kBench, kU01, DeterministicOrder{0.5}, cfg);
    cfg.antithetic = true;
    const auto anti = mc::simulate_profit(kBench, kU01, DeterministicOrder{0.5}, cfg);
    CHECK(mc::z_score(0.25, anti) <= 4.0);
    CHECK(anti.std_error < 0.75 * plain.std_error);
    CHECK(std::isnan(anti.variance_std_error));
    cfg.n_draws = 1'000'001;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("antithetic uniform stream mirrors the previous draw") {
    UniformStream s(CounterRng(5, 0));
    s.set_antithetic(true);
    s.begin_draw();
    const double a = s.next();
    const double b = s.next();
    s.begin_draw();
    CHECK(s.next() == 1.0 - a);
    CHECK(s.next() == 1.0 - b);
    s.begin_draw();
    CHECK(s.next() != 1.0 - a);
}

TEST_CASE("counter rng streams") {
    CounterRng a(1, 0);
    CounterRng b(1, 0);
    CounterRng c(1, 1);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        CHECK(x != c.next_u64());
    }
    CounterRng u(3, 3);
    for (int i = 0; i < 10000; ++i) {
        const double v = u.uniform();
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("config validation") {
    auto cfg = config(0, 1);
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = config(10, 1);
    cfg.batch_size = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK_THROWS_AS(mc::simulate_profit(kBench, kU01, DeterministicOrder{-1.0}, config(10, 1)), DomainError);
}

#pragma once

#include <cstddef>
#include <cstdint>

#include "randopt/bench.hpp"
#include "randopt/distribution.hpp"
#include "randopt/order_policy.hpp"

namespace randopt::mc {

struct SimConfig {
    std::size_t n_draws = 1'000'000;
    std::uint64_t seed = 0;
    std::size_t batch_size = 65'536;
    bool antithetic = false;
    unsigned threads = 0;  // 0: hardware concurrency

    void validate() const;
};

/// Summary of a simulated quantity. With antithetic pairing the variance
/// is the effective per-draw variance (twice the variance of pair means),
/// so std_error = sqrt(variance / n) holds in both modes.
struct SimReport {
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    double ci95_lo = 0.0;
    double ci95_hi = 0.0;
    /// Standard error of `variance` itself (delta method on the fourth
    /// central moment); NaN with antithetic pairing.
    double variance_std_error = 0.0;
};

/// One-pass mean and central moments up to order four with a pairwise
/// merge, so batch results can be combined in a fixed order.
class RunningStats {
public:
    void push(double x);
    void merge(const RunningStats& other);

    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    /// Unbiased sample variance (n - 1 denominator); 0 for n < 2.
    double variance() const;
    /// Fourth central moment (population normalisation).
    double fourth_moment() const;

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double m3_ = 0.0;
    double m4_ = 0.0;
};

/// Realised profit p * min(q, d) - w * q per draw, q and d independent.
SimReport simulate_profit(const MarketParams& m, const Distribution& demand, const OrderPolicy& policy,
                          const SimConfig& cfg);

/// max(a, b) per draw for independent a ~ A, b ~ B.
SimReport simulate_expected_max(const Distribution& a, const Distribution& b, const SimConfig& cfg);

/// |analytic - simulated mean| / std_error (0 when both are exact).
double z_score(double analytic, const SimReport& r);

}  // namespace randopt::mc

#pragma once

// Independent reference computations for the test suites. Nothing here
// calls the library's integrals, quantiles or random streams: integrals use
// plain composite Simpson rules, closed forms are written out by hand, and
// Monte-Carlo uses std::mt19937_64.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

/// Composite Simpson rule with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
    if (!(b > a)) return 0.0;
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

/// Simpson on each piece between consecutive sorted points. Endpoints of
/// pieces are nudged inwards so one-sided limits are used at jumps.
inline double simpson_pieces(const std::function<double(double)>& f, std::vector<double> pts, int n = 2000) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i];
        const double b = pts[i + 1];
        const double eps = 1e-13 * std::max(1.0, std::abs(b));
        acc += simpson(f, a + eps, b - eps, n);
    }
    return acc;
}

/// Integral over [0, inf) of a function decaying at least exponentially,
/// via t = x / (1 - x) on a dense Simpson grid.
inline double simpson_half_line(const std::function<double(double)>& f, double scale, int n = 200000) {
    auto g = [&](double x) {
        if (x >= 1.0) return 0.0;
        const double t = scale * x / (1.0 - x);
        return f(t) * scale / ((1.0 - x) * (1.0 - x));
    };
    return simpson(g, 0.0, 1.0 - 1e-12, n);
}

// Closed forms for Uniform(lo, hi).
struct UniformCF {
    double lo, hi;
    double cdf(double x) const { return std::clamp((x - lo) / (hi - lo), 0.0, 1.0); }
    double mean() const { return 0.5 * (lo + hi); }
    // int_0^q t f(t) dt
    double pe(double q) const {
        const double m = std::clamp(q, lo, hi);
        return (m * m - lo * lo) / (2.0 * (hi - lo));
    }
    // int_0^q F(t) dt
    double ic(double q) const {
        if (q <= lo) return 0.0;
        if (q <= hi) return (q - lo) * (q - lo) / (2.0 * (hi - lo));
        return (hi - lo) / 2.0 + (q - hi);
    }
    // int_0^q t F(t) dt
    double wic(double q) const {
        if (q <= lo) return 0.0;
        const double m = std::min(q, hi);
        const double in = (m * m * m / 3.0 - lo * m * m / 2.0 - (lo * lo * lo / 3.0 - lo * lo * lo / 2.0)) / (hi - lo);
        return q <= hi ? in : in + (q * q - hi * hi) / 2.0;
    }
};

// Closed forms for Exponential(rate).
struct ExponentialCF {
    double rate;
    double cdf(double x) const { return x <= 0 ? 0.0 : 1.0 - std::exp(-rate * x); }
    double mean() const { return 1.0 / rate; }
    double pe(double q) const { return (1.0 - std::exp(-rate * q) * (1.0 + rate * q)) / rate; }
    double ic(double q) const { return q - (1.0 - std::exp(-rate * q)) / rate; }
    double wic(double q) const { return q * q / 2.0 - pe(q) / rate; }
};

/// E[max(A, B)] = int_0^inf (1 - F_A F_B) dt on pieces [pts] then tail.
inline double expected_max_survival(const std::function<double(double)>& fa, const std::function<double(double)>& fb,
                                    std::vector<double> pts, int n = 4000) {
    return simpson_pieces([&](double t) { return 1.0 - fa(t) * fb(t); }, std::move(pts), n);
}

/// E[min(A, B)] = int_0^inf (1 - F_A)(1 - F_B) dt.
inline double expected_min_survival(const std::function<double(double)>& fa, const std::function<double(double)>& fb,
                                    std::vector<double> pts, int n = 4000) {
    return simpson_pieces([&](double t) { return (1.0 - fa(t)) * (1.0 - fb(t)); }, std::move(pts), n);
}

struct McEstimate {
    double mean;
    double variance;
    double std_error;
};

/// Plain Monte-Carlo with std::mt19937_64 and a two-pass variance.
inline McEstimate monte_carlo(const std::function<double(std::mt19937_64&)>& draw, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> xs(n);
    double sum = 0.0;
    for (auto& x : xs) {
        x = draw(rng);
        sum += x;
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double var = ss / static_cast<double>(n - 1);
    return {mean, var, std::sqrt(var / static_cast<double>(n))};
}

/// Expected profit of ordering q ~ Uniform(a, b) when demand ~ Uniform(0, H)
/// and a, b <= H: E[q] - p... written out for p, w: p(E q - E q^2 / (2H)) - w E q.
inline double uniform_policy_profit_uniform_demand(double p, double w, double a, double b, double H) {
    const double eq = 0.5 * (a + b);
    const double eq2 = (a * a + a * b + b * b) / 3.0;
    return p * (eq - eq2 / (2.0 * H)) - w * eq;
}

}  // namespace oracle

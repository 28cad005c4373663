#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "randopt/rng.hpp"

namespace randopt {

enum class Family { Uniform, Exponential, LogNormal, TruncatedNormal, Empirical, Mixture };

std::string_view family_name(Family f);

struct Support {
    double lo;
    double hi;  // +inf for unbounded families
};

class Distribution;

struct MixtureComponent {
    double weight;
    std::shared_ptr<const Distribution> dist;
};

/// Univariate distribution on [0, inf). Immutable value type; copies share
/// the heavy payloads (sample arrays, mixture components).
///
/// Any parametric family can carry an optional upper truncation bound, in
/// which case mass is renormalised onto [support.lo, upper]. Truncating an
/// empirical or mixture distribution is canonicalised on construction
/// (samples above the bound are dropped; mixture components are truncated
/// individually and reweighted), so only parametric leaves store a bound.
class Distribution {
public:
    static Distribution uniform(double lo, double hi);
    static Distribution exponential(double rate);
    static Distribution lognormal(double log_mean, double log_sd);
    static Distribution truncated_normal(double mean, double sd);
    static Distribution empirical(std::vector<double> values);
    static Distribution mixture(std::vector<std::pair<double, Distribution>> components);

    Distribution truncated_above(double upper) const;

    Family family() const;
    std::optional<double> upper_bound() const { return upper_; }
    bool is_parametric() const;
    /// True when the law has no atoms (empirical data anywhere makes it false).
    bool is_continuous() const;

    /// Named parameters of a parametric family, in canonical order.
    std::vector<std::pair<std::string, double>> parameters() const;
    /// Copy with one parameter replaced; throws ValidationError if the
    /// result is not a valid distribution.
    Distribution with_parameter(std::string_view name, double value) const;

    const std::vector<MixtureComponent>& components() const;
    std::span<const double> sample_values() const;

    double cdf(double x) const;
    double pdf(double x) const;
    double quantile(double u) const;
    double mean() const;
    /// Integral of t f(t) over [0, q].
    double partial_expectation(double q) const;
    /// Integral of F(t) over [0, q].
    double integrated_cdf(double q) const;
    /// Integral of t F(t) over [0, q].
    double weighted_integrated_cdf(double q) const;
    /// Integral of t f(t) over [q, inf).
    double upper_partial_expectation(double q) const;

    Support support() const;
    /// Point beyond which at most `tail` probability mass remains.
    double tail_point(double tail) const;
    /// Support endpoints of every leaf, for quadrature panelling.
    std::vector<double> breakpoints() const;

    /// One inverse-transform draw.
    double draw(UniformStream& uniforms) const;

    std::string describe() const;

    friend bool operator==(const Distribution& a, const Distribution& b);

private:
    struct UniformP {
        double lo, hi;
        bool operator==(const UniformP&) const = default;
    };
    struct ExponentialP {
        double rate;
        bool operator==(const ExponentialP&) const = default;
    };
    struct LogNormalP {
        double log_mean, log_sd;
        bool operator==(const LogNormalP&) const = default;
    };
    struct TruncNormalP {
        double mean, sd;
        double lower_survival;  // P(N(mean, sd) > 0)
        bool operator==(const TruncNormalP& o) const { return mean == o.mean && sd == o.sd; }
    };
    struct EmpiricalData {
        std::vector<double> values;  // sorted
        std::vector<double> prefix;  // prefix[i] = sum of values[0..i)
        std::vector<double> prefix_sq;
    };
    struct EmpiricalP {
        std::shared_ptr<const EmpiricalData> data;
        bool operator==(const EmpiricalP& o) const { return data->values == o.data->values; }
    };
    struct MixtureP {
        std::vector<MixtureComponent> components;
        bool operator==(const MixtureP& o) const;
    };
    using Kind = std::variant<UniformP, ExponentialP, LogNormalP, TruncNormalP, EmpiricalP, MixtureP>;

    explicit Distribution(Kind kind) : kind_(std::move(kind)) {}

    // Untruncated kernels.
    double base_cdf(double x) const;
    double base_pdf(double x) const;
    double base_quantile(double u) const;
    double base_mean() const;
    double base_partial_expectation(double q) const;
    double base_integrated_cdf(double q) const;
    double base_weighted_integrated_cdf(double q) const;
    double base_tail_point(double tail) const;
    Support base_support() const;

    double mixture_quantile(double u) const;

    Kind kind_;
    std::optional<double> upper_;
    double upper_mass_ = 1.0;  // base_cdf(upper_)
};

/// E[max(A, B)] for independent A, B.
double expected_max(const Distribution& a, const Distribution& b);
/// E[min(A, B)] from the identity min + max = A + B.
double expected_min(const Distribution& a, const Distribution& b);
/// E[max(q, D)] for a constant q.
double expected_max(double q, const Distribution& d);

/// n deterministic draws from stream 0 of `seed`.
std::vector<double> sample(const Distribution& dist, std::size_t n, std::uint64_t seed);

}  // namespace randopt

#include "randopt/distribution.hpp"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "randopt/errors.hpp"
#include "randopt/quadrature.hpp"

namespace randopt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kWeightSumTol = 1e-12;
// Quadrature over unbounded supports stops where this much mass remains;
// the remainder is added back through a bracketed tail estimate.
constexpr double kTailMass = 1e-14;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double norm_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
double norm_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

// z with norm_cdf(z) = p, accurate in both tails.
double norm_quantile(double p) {
    if (p < 0.5) return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
    return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * (1.0 - p));
}

// z with norm_sf(z) = q.
double norm_sf_inverse(double q) {
    if (q < 0.5) return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q);
    return -norm_quantile(1.0 - q);
}

// 1 - e^{-x}(1 + x), kept accurate for small x.
double exp_partial_moment(double x) {
    if (x < 1e-2) {
        // x^2/2 - x^3/3 + x^4/8 - x^5/30 + x^6/144
        return x * x * (0.5 - x * (1.0 / 3.0 - x * (1.0 / 8.0 - x * (1.0 / 30.0 - x / 144.0))));
    }
    return -std::expm1(-x) - x * std::exp(-x);
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

void require_nonneg_arg(double q, const char* op) {
    if (!(q >= 0.0)) throw DomainError(std::string(op) + ": argument must be >= 0");
}

}  // namespace

std::string_view family_name(Family f) {
    switch (f) {
        case Family::Uniform: return "uniform";
        case Family::Exponential: return "exponential";
        case Family::LogNormal: return "lognormal";
        case Family::TruncatedNormal: return "truncated_normal";
        case Family::Empirical: return "empirical";
        case Family::Mixture: return "mixture";
    }
    return "unknown";
}

bool Distribution::MixtureP::operator==(const MixtureP& o) const {
    if (components.size() != o.components.size()) return false;
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (components[i].weight != o.components[i].weight) return false;
        if (!(*components[i].dist == *o.components[i].dist)) return false;
    }
    return true;
}

bool operator==(const Distribution& a, const Distribution& b) {
    return a.upper_ == b.upper_ && a.kind_ == b.kind_;
}

// ---------------------------------------------------------------------------
// Construction

Distribution Distribution::uniform(double lo, double hi) {
    require(std::isfinite(lo) && std::isfinite(hi), "uniform: bounds must be finite");
    require(lo >= 0.0, "uniform: lo must be >= 0");
    require(lo < hi, "uniform: lo must be < hi");
    return Distribution(UniformP{lo, hi});
}

Distribution Distribution::exponential(double rate) {
    require(std::isfinite(rate) && rate > 0.0, "exponential: rate must be > 0");
    return Distribution(ExponentialP{rate});
}

Distribution Distribution::lognormal(double log_mean, double log_sd) {
    require(std::isfinite(log_mean), "lognormal: log_mean must be finite");
    require(std::isfinite(log_sd) && log_sd > 0.0, "lognormal: log_sd must be > 0");
    return Distribution(LogNormalP{log_mean, log_sd});
}

Distribution Distribution::truncated_normal(double mean, double sd) {
    require(std::isfinite(mean), "truncated_normal: mean must be finite");
    require(std::isfinite(sd) && sd > 0.0, "truncated_normal: sd must be > 0");
    const double survival = norm_sf(-mean / sd);
    require(survival > 1e-290, "truncated_normal: no representable mass above 0");
    return Distribution(TruncNormalP{mean, sd, survival});
}

Distribution Distribution::empirical(std::vector<double> values) {
    require(!values.empty(), "empirical: sample must be non-empty");
    for (double v : values) {
        require(std::isfinite(v) && v >= 0.0, "empirical: sample values must be finite and >= 0");
    }
    std::sort(values.begin(), values.end());
    auto data = std::make_shared<EmpiricalData>();
    data->prefix.assign(values.size() + 1, 0.0);
    data->prefix_sq.assign(values.size() + 1, 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        data->prefix[i + 1] = data->prefix[i] + values[i];
        data->prefix_sq[i + 1] = data->prefix_sq[i] + values[i] * values[i];
    }
    data->values = std::move(values);
    return Distribution(EmpiricalP{std::move(data)});
}

Distribution Distribution::mixture(std::vector<std::pair<double, Distribution>> components) {
    require(!components.empty(), "mixture: needs at least one component");
    double total = 0.0;
    MixtureP m;
    for (auto& [w, d] : components) {
        require(std::isfinite(w) && w > 0.0, "mixture: weights must be > 0");
        total += w;
        m.components.push_back({w, std::make_shared<const Distribution>(std::move(d))});
    }
    require(std::abs(total - 1.0) <= kWeightSumTol, "mixture: weights must sum to 1");
    return Distribution(std::move(m));
}

Distribution Distribution::truncated_above(double upper) const {
    require(std::isfinite(upper), "truncation bound must be finite");
    if (upper_ && *upper_ <= upper) return *this;
    return std::visit(
        overloaded{
            [&](const EmpiricalP& e) {
                std::vector<double> kept;
                for (double v : e.data->values)
                    if (v <= upper) kept.push_back(v);
                require(!kept.empty(), "truncation bound lies below every sample value");
                return Distribution::empirical(std::move(kept));
            },
            [&](const MixtureP& m) {
                std::vector<std::pair<double, Distribution>> parts;
                double mass = 0.0;
                for (const auto& c : m.components) {
                    const double inside = c.weight * c.dist->cdf(upper);
                    if (inside > 0.0) {
                        parts.emplace_back(inside, c.dist->truncated_above(upper));
                        mass += inside;
                    }
                }
                require(mass > 0.0, "truncation bound leaves no mass");
                for (auto& p : parts) p.first /= mass;
                // Renormalised weights may drift from 1 by a few ulps.
                double total = 0.0;
                for (const auto& p : parts) total += p.first;
                parts.back().first += 1.0 - total;
                return Distribution::mixture(std::move(parts));
            },
            [&](const auto&) {
                const Support s = base_support();
                if (upper >= s.hi) {
                    Distribution copy = *this;
                    copy.upper_.reset();
                    copy.upper_mass_ = 1.0;
                    return copy;
                }
                require(upper > s.lo, "truncation bound must exceed the support lower bound");
                Distribution copy = *this;
                copy.upper_ = upper;
                copy.upper_mass_ = base_cdf(upper);
                require(copy.upper_mass_ > 0.0, "truncation bound leaves no mass");
                return copy;
            },
        },
        kind_);
}

Family Distribution::family() const {
    return std::visit(overloaded{
                          [](const UniformP&) { return Family::Uniform; },
                          [](const ExponentialP&) { return Family::Exponential; },
                          [](const LogNormalP&) { return Family::LogNormal; },
                          [](const TruncNormalP&) { return Family::TruncatedNormal; },
                          [](const EmpiricalP&) { return Family::Empirical; },
                          [](const MixtureP&) { return Family::Mixture; },
                      },
                      kind_);
}

bool Distribution::is_parametric() const {
    const Family f = family();
    return f != Family::Empirical && f != Family::Mixture;
}

bool Distribution::is_continuous() const {
    if (const auto* m = std::get_if<MixtureP>(&kind_)) {
        return std::all_of(m->components.begin(), m->components.end(),
                           [](const MixtureComponent& c) { return c.dist->is_continuous(); });
    }
    return family() != Family::Empirical;
}

std::vector<std::pair<std::string, double>> Distribution::parameters() const {
    return std::visit(overloaded{
                          [](const UniformP& u) -> std::vector<std::pair<std::string, double>> {
                              return {{"lo", u.lo}, {"hi", u.hi}};
                          },
                          [](const ExponentialP& e) -> std::vector<std::pair<std::string, double>> {
                              return {{"rate", e.rate}};
                          },
                          [](const LogNormalP& l) -> std::vector<std::pair<std::string, double>> {
                              return {{"log_mean", l.log_mean}, {"log_sd", l.log_sd}};
                          },
                          [](const TruncNormalP& t) -> std::vector<std::pair<std::string, double>> {
                              return {{"mean", t.mean}, {"sd", t.sd}};
                          },
                          [](const auto&) -> std::vector<std::pair<std::string, double>> { return {}; },
                      },
                      kind_);
}

Distribution Distribution::with_parameter(std::string_view name, double value) const {
    auto params = parameters();
    if (params.empty()) {
        throw ValidationError(std::string(family_name(family())) + " has no named parameters");
    }
    bool found = false;
    for (auto& [n, v] : params) {
        if (n == name) {
            v = value;
            found = true;
        }
    }
    if (!found) {
        throw ValidationError("unknown parameter '" + std::string(name) + "' for family " +
                              std::string(family_name(family())));
    }
    Distribution out = [&] {
        switch (family()) {
            case Family::Uniform: return uniform(params[0].second, params[1].second);
            case Family::Exponential: return exponential(params[0].second);
            case Family::LogNormal: return lognormal(params[0].second, params[1].second);
            case Family::TruncatedNormal: return truncated_normal(params[0].second, params[1].second);
            default: break;
        }
        throw ValidationError("unreachable family");
    }();
    return upper_ ? out.truncated_above(*upper_) : out;
}

const std::vector<MixtureComponent>& Distribution::components() const {
    static const std::vector<MixtureComponent> none;
    if (const auto* m = std::get_if<MixtureP>(&kind_)) return m->components;
    return none;
}

std::span<const double> Distribution::sample_values() const {
    if (const auto* e = std::get_if<EmpiricalP>(&kind_)) return e->data->values;
    return {};
}

// ---------------------------------------------------------------------------
// Untruncated kernels

double Distribution::base_cdf(double x) const {
    return std::visit(
        overloaded{
            [&](const UniformP& u) { return std::clamp((x - u.lo) / (u.hi - u.lo), 0.0, 1.0); },
            [&](const ExponentialP& e) { return x <= 0.0 ? 0.0 : -std::expm1(-e.rate * x); },
            [&](const LogNormalP& l) {
                return x <= 0.0 ? 0.0 : norm_cdf((std::log(x) - l.log_mean) / l.log_sd);
            },
            [&](const TruncNormalP& t) {
                if (x <= 0.0) return 0.0;
                const double z = (x - t.mean) / t.sd;
                if (z <= 0.0) return (norm_cdf(z) - norm_cdf(-t.mean / t.sd)) / t.lower_survival;
                return 1.0 - norm_sf(z) / t.lower_survival;
            },
            [&](const EmpiricalP& e) {
                const auto& v = e.data->values;
                const auto k = std::upper_bound(v.begin(), v.end(), x) - v.begin();
                return static_cast<double>(k) / static_cast<double>(v.size());
            },
            [&](const MixtureP& m) {
                double acc = 0.0;
                for (const auto& c : m.components) acc += c.weight * c.dist->cdf(x);
                return acc;
            },
        },
        kind_);
}

double Distribution::base_pdf(double x) const {
    return std::visit(
        overloaded{
            [&](const UniformP& u) { return (x >= u.lo && x <= u.hi) ? 1.0 / (u.hi - u.lo) : 0.0; },
            [&](const ExponentialP& e) { return x < 0.0 ? 0.0 : e.rate * std::exp(-e.rate * x); },
            [&](const LogNormalP& l) {
                if (x <= 0.0) return 0.0;
                const double z = (std::log(x) - l.log_mean) / l.log_sd;
                return norm_pdf(z) / (x * l.log_sd);
            },
            [&](const TruncNormalP& t) {
                if (x < 0.0) return 0.0;
                return norm_pdf((x - t.mean) / t.sd) / (t.sd * t.lower_survival);
            },
            [&](const EmpiricalP&) { return 0.0; },
            [&](const MixtureP& m) {
                double acc = 0.0;
                for (const auto& c : m.components) acc += c.weight * c.dist->pdf(x);
                return acc;
            },
        },
        kind_);
}

double Distribution::base_quantile(double u) const {
    return std::visit(
        overloaded{
            [&](const UniformP& p) { return p.lo + u * (p.hi - p.lo); },
            [&](const ExponentialP& e) { return -std::log1p(-u) / e.rate; },
            [&](const LogNormalP& l) { return std::exp(l.log_mean + l.log_sd * norm_quantile(u)); },
            [&](const TruncNormalP& t) {
                const double alpha = -t.mean / t.sd;
                const double lower = norm_cdf(alpha);
                const double p = lower + u * t.lower_survival;
                const double z = p < 0.5 ? norm_quantile(p) : norm_sf_inverse((1.0 - u) * t.lower_survival);
                return std::max(0.0, t.mean + t.sd * z);
            },
            [&](const EmpiricalP& e) {
                const auto& v = e.data->values;
                const double n = static_cast<double>(v.size());
                auto k = static_cast<std::size_t>(std::ceil(u * n));
                k = std::clamp<std::size_t>(k, 1, v.size());
                // Smallest k with k/n >= u, using the same k/n the cdf reports.
                while (k > 1 && static_cast<double>(k - 1) / n >= u) --k;
                while (k < v.size() && static_cast<double>(k) / n < u) ++k;
                return v[k - 1];
            },
            [&](const MixtureP&) { return mixture_quantile(u); },
        },
        kind_);
}

double Distribution::mixture_quantile(double u) const {
    const Support s = support();
    double lo = s.lo;
    double hi = s.hi;
    if (!std::isfinite(hi)) {
        hi = std::max(tail_point(std::min(1e-3, 0.5 * (1.0 - u))), lo + 1.0);
        for (int i = 0; i < 200 && cdf(hi) < u; ++i) hi = lo + 2.0 * (hi - lo);
    }
    if (cdf(lo) >= u) return lo;
    // Invariant: cdf(lo) < u <= cdf(hi). Stop when the bracket cannot shrink.
    for (int i = 0; i < 2000; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        if (cdf(mid) >= u) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

double Distribution::base_mean() const {
    return std::visit(
        overloaded{
            [](const UniformP& u) { return 0.5 * (u.lo + u.hi); },
            [](const ExponentialP& e) { return 1.0 / e.rate; },
            [](const LogNormalP& l) { return std::exp(l.log_mean + 0.5 * l.log_sd * l.log_sd); },
            [](const TruncNormalP& t) {
                return t.mean + t.sd * norm_pdf(-t.mean / t.sd) / t.lower_survival;
            },
            [](const EmpiricalP& e) {
                return e.data->prefix.back() / static_cast<double>(e.data->values.size());
            },
            [](const MixtureP& m) {
                double acc = 0.0;
                for (const auto& c : m.components) acc += c.weight * c.dist->mean();
                return acc;
            },
        },
        kind_);
}

double Distribution::base_partial_expectation(double q) const {
    return std::visit(
        overloaded{
            [&](const UniformP& u) {
                const double m = std::clamp(q, u.lo, u.hi);
                return (m - u.lo) * (m + u.lo) / (2.0 * (u.hi - u.lo));
            },
            [&](const ExponentialP& e) { return exp_partial_moment(e.rate * q) / e.rate; },
            [&](const LogNormalP& l) {
                if (q <= 0.0) return 0.0;
                const double s2 = l.log_sd * l.log_sd;
                return std::exp(l.log_mean + 0.5 * s2) *
                       norm_cdf((std::log(q) - l.log_mean - s2) / l.log_sd);
            },
            [&](const TruncNormalP& t) {
                if (q <= 0.0) return 0.0;
                const double alpha = -t.mean / t.sd;
                const double beta = (q - t.mean) / t.sd;
                return t.mean * base_cdf(q) + t.sd * (norm_pdf(alpha) - norm_pdf(beta)) / t.lower_survival;
            },
            [&](const EmpiricalP& e) {
                const auto& v = e.data->values;
                const auto k = std::upper_bound(v.begin(), v.end(), q) - v.begin();
                return e.data->prefix[k] / static_cast<double>(v.size());
            },
            [&](const MixtureP& m) {
                double acc = 0.0;
                for (const auto& c : m.components) acc += c.weight * c.dist->partial_expectation(q);
                return acc;
            },
        },
        kind_);
}

double Distribution::base_integrated_cdf(double q) const {
    return std::visit(
        overloaded{
            [&](const UniformP& u) {
                if (q <= u.lo) return 0.0;
                const double width = u.hi - u.lo;
                if (q <= u.hi) return (q - u.lo) * (q - u.lo) / (2.0 * width);
                return 0.5 * width + (q - u.hi);
            },
            [&](const ExponentialP& e) { return q + std::expm1(-e.rate * q) / e.rate; },
            [&](const EmpiricalP& e) {
                const auto& v = e.data->values;
                const auto k = std::upper_bound(v.begin(), v.end(), q) - v.begin();
                return (static_cast<double>(k) * q - e.data->prefix[k]) / static_cast<double>(v.size());
            },
            [&](const MixtureP& m) {
                double acc = 0.0;
                for (const auto& c : m.components) acc += c.weight * c.dist->integrated_cdf(q);
                return acc;
            },
            [&](const auto&) {
                if (q <= 0.0) return 0.0;
                return std::max(0.0, q * base_cdf(q) - base_partial_expectation(q));
            },
        },
        kind_);
}

double Distribution::base_weighted_integrated_cdf(double q) const {
    return std::visit(
        overloaded{
            [&](const UniformP& u) {
                if (q <= u.lo) return 0.0;
                const double d = std::min(q, u.hi) - u.lo;
                const double inside = (0.5 * u.lo * d * d + d * d * d / 3.0) / (u.hi - u.lo);
                return q <= u.hi ? inside : inside + 0.5 * (q - u.hi) * (q + u.hi);
            },
            [&](const ExponentialP& e) {
                return 0.5 * q * q - base_partial_expectation(q) / e.rate;
            },
            [&](const LogNormalP& l) {
                if (q <= 0.0) return 0.0;
                const double s2 = l.log_sd * l.log_sd;
                const double second = std::exp(2.0 * l.log_mean + 2.0 * s2) *
                                      norm_cdf((std::log(q) - l.log_mean - 2.0 * s2) / l.log_sd);
                return std::max(0.0, 0.5 * (q * q * base_cdf(q) - second));
            },
            [&](const TruncNormalP& t) {
                if (q <= 0.0) return 0.0;
                const double alpha = -t.mean / t.sd;
                const double beta = (q - t.mean) / t.sd;
                const double fq = base_cdf(q);
                const double dphi = (norm_pdf(alpha) - norm_pdf(beta)) / t.lower_survival;
                const double edge = (alpha * norm_pdf(alpha) - beta * norm_pdf(beta)) / t.lower_survival;
                const double second = t.mean * t.mean * fq + 2.0 * t.mean * t.sd * dphi +
                                      t.sd * t.sd * (fq + edge);
                return std::max(0.0, 0.5 * (q * q * fq - second));
            },
            [&](const EmpiricalP& e) {
                const auto& v = e.data->values;
                const auto k = std::upper_bound(v.begin(), v.end(), q) - v.begin();
                return 0.5 * (static_cast<double>(k) * q * q - e.data->prefix_sq[k]) /
                       static_cast<double>(v.size());
            },
            [&](const MixtureP& m) {
                double acc = 0.0;
                for (const auto& c : m.components) acc += c.weight * c.dist->weighted_integrated_cdf(q);
                return acc;
            },
        },
        kind_);
}

Support Distribution::base_support() const {
    return std::visit(
        overloaded{
            [](const UniformP& u) { return Support{u.lo, u.hi}; },
            [](const EmpiricalP& e) { return Support{e.data->values.front(), e.data->values.back()}; },
            [](const MixtureP& m) {
                Support s{kInf, 0.0};
                for (const auto& c : m.components) {
                    const Support cs = c.dist->support();
                    s.lo = std::min(s.lo, cs.lo);
                    s.hi = std::max(s.hi, cs.hi);
                }
                return s;
            },
            [](const auto&) { return Support{0.0, kInf}; },
        },
        kind_);
}

double Distribution::base_tail_point(double tail) const {
    return std::visit(
        overloaded{
            [&](const UniformP& u) { return u.hi - tail * (u.hi - u.lo); },
            [&](const ExponentialP& e) { return -std::log(tail) / e.rate; },
            [&](const LogNormalP& l) { return std::exp(l.log_mean + l.log_sd * norm_sf_inverse(tail)); },
            [&](const TruncNormalP& t) {
                return std::max(0.0, t.mean + t.sd * norm_sf_inverse(tail * t.lower_survival));
            },
            [&](const EmpiricalP& e) { return e.data->values.back(); },
            [&](const MixtureP& m) {
                double hi = 0.0;
                for (const auto& c : m.components) hi = std::max(hi, c.dist->tail_point(tail));
                return hi;
            },
        },
        kind_);
}

// ---------------------------------------------------------------------------
// Public evaluation (applies the optional upper truncation)

double Distribution::cdf(double x) const {
    if (!upper_) return base_cdf(x);
    if (x >= *upper_) return 1.0;
    return base_cdf(x) / upper_mass_;
}

double Distribution::pdf(double x) const {
    if (!upper_) return base_pdf(x);
    if (x > *upper_) return 0.0;
    return base_pdf(x) / upper_mass_;
}

double Distribution::quantile(double u) const {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile: probability must lie in (0, 1)");
    if (!upper_) return base_quantile(u);
    return std::min(*upper_, base_quantile(u * upper_mass_));
}

double Distribution::mean() const {
    if (!upper_) return base_mean();
    return base_partial_expectation(*upper_) / upper_mass_;
}

double Distribution::partial_expectation(double q) const {
    require_nonneg_arg(q, "partial_expectation");
    if (!upper_) return base_partial_expectation(q);
    return base_partial_expectation(std::min(q, *upper_)) / upper_mass_;
}

double Distribution::integrated_cdf(double q) const {
    require_nonneg_arg(q, "integrated_cdf");
    if (!upper_) return base_integrated_cdf(q);
    const double inside = base_integrated_cdf(std::min(q, *upper_)) / upper_mass_;
    return q > *upper_ ? inside + (q - *upper_) : inside;
}

double Distribution::weighted_integrated_cdf(double q) const {
    require_nonneg_arg(q, "weighted_integrated_cdf");
    if (!upper_) return base_weighted_integrated_cdf(q);
    const double inside = base_weighted_integrated_cdf(std::min(q, *upper_)) / upper_mass_;
    return q > *upper_ ? inside + 0.5 * (q - *upper_) * (q + *upper_) : inside;
}

double Distribution::upper_partial_expectation(double q) const {
    require_nonneg_arg(q, "upper_partial_expectation");
    return std::max(0.0, mean() - partial_expectation(q));
}

Support Distribution::support() const {
    Support s = base_support();
    if (upper_) s.hi = std::min(s.hi, *upper_);
    return s;
}

double Distribution::tail_point(double tail) const {
    if (!upper_) return base_tail_point(tail);
    return std::min(*upper_, base_tail_point(tail * upper_mass_ + (1.0 - upper_mass_)));
}

std::vector<double> Distribution::breakpoints() const {
    if (const auto* m = std::get_if<MixtureP>(&kind_)) {
        std::vector<double> out;
        for (const auto& c : m->components) {
            auto b = c.dist->breakpoints();
            out.insert(out.end(), b.begin(), b.end());
        }
        return out;
    }
    const Support s = support();
    std::vector<double> out{s.lo};
    if (std::isfinite(s.hi)) out.push_back(s.hi);
    return out;
}

double Distribution::draw(UniformStream& uniforms) const {
    if (const auto* m = std::get_if<MixtureP>(&kind_)) {
        const double u = uniforms.next();
        double acc = 0.0;
        for (const auto& c : m->components) {
            acc += c.weight;
            if (u <= acc) return c.dist->draw(uniforms);
        }
        return m->components.back().dist->draw(uniforms);
    }
    if (const auto* e = std::get_if<EmpiricalP>(&kind_)) {
        const auto& v = e->data->values;
        const auto idx = static_cast<std::size_t>(uniforms.next() * static_cast<double>(v.size()));
        return v[std::min(idx, v.size() - 1)];
    }
    return quantile(uniforms.next());
}

std::string Distribution::describe() const {
    std::ostringstream os;
    os.precision(10);
    os << family_name(family()) << "(";
    if (const auto* m = std::get_if<MixtureP>(&kind_)) {
        os << m->components.size() << " components";
    } else if (const auto* e = std::get_if<EmpiricalP>(&kind_)) {
        os << "n=" << e->data->values.size();
    } else {
        bool first = true;
        for (const auto& [n, v] : parameters()) {
            os << (first ? "" : ", ") << n << "=" << v;
            first = false;
        }
    }
    if (upper_) os << "; upper=" << *upper_;
    os << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// Expectations of max / min

namespace {

struct Leaf {
    double weight;
    const Distribution* dist;
};

void collect_leaves(const Distribution& d, double weight, std::vector<Leaf>& out) {
    if (d.family() == Family::Mixture) {
        for (const auto& c : d.components()) collect_leaves(*c.dist, weight * c.weight, out);
        return;
    }
    out.push_back({weight, &d});
}

// Integral of x f_X(x) F_Y(x) over X's support, both continuous leaves.
double lower_max_term(const Distribution& x, const Distribution& y) {
    const Support sx = x.support();
    const bool bounded = std::isfinite(sx.hi);
    const double cut = bounded ? sx.hi : x.tail_point(kTailMass);

    std::vector<double> breaks = x.breakpoints();
    const auto by = y.breakpoints();
    breaks.insert(breaks.end(), by.begin(), by.end());

    const auto r = quad::integrate([&](double t) { return t * x.pdf(t) * y.cdf(t); }, sx.lo, cut, breaks);
    double value = r.value;
    if (!bounded) {
        // Tail mass of t f_X(t) beyond the cut, times F_Y somewhere in [F_Y(cut), 1].
        value += x.upper_partial_expectation(cut) * 0.5 * (1.0 + y.cdf(cut));
    }
    return value;
}

double leaf_expected_max(const Distribution& a, const Distribution& b) {
    if (a.family() == Family::Empirical) {
        const auto v = a.sample_values();
        double acc = 0.0;
        for (double x : v) acc += expected_max(x, b);
        return acc / static_cast<double>(v.size());
    }
    if (b.family() == Family::Empirical) return leaf_expected_max(b, a);
    return lower_max_term(a, b) + lower_max_term(b, a);
}

}  // namespace

double expected_max(double q, const Distribution& d) {
    return q * d.cdf(q) + d.upper_partial_expectation(std::max(q, 0.0));
}

double expected_max(const Distribution& a, const Distribution& b) {
    std::vector<Leaf> la;
    std::vector<Leaf> lb;
    collect_leaves(a, 1.0, la);
    collect_leaves(b, 1.0, lb);
    double acc = 0.0;
    for (const auto& x : la) {
        for (const auto& y : lb) acc += x.weight * y.weight * leaf_expected_max(*x.dist, *y.dist);
    }
    return acc;
}

double expected_min(const Distribution& a, const Distribution& b) {
    return a.mean() + b.mean() - expected_max(a, b);
}

std::vector<double> sample(const Distribution& dist, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw DomainError("sample: n must be >= 1");
    UniformStream uniforms(CounterRng(seed, 0));
    std::vector<double> out(n);
    for (auto& x : out) {
        uniforms.begin_draw();
        x = dist.draw(uniforms);
    }
    return out;
}

}  // namespace randopt

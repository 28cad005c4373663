#include "randopt/order_policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "parallel.hpp"
#include "randopt/errors.hpp"
#include "randopt/rng.hpp"

namespace randopt {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double q_hat_of(const MarketParams& m, const ScenarioTriple& s) {
    return order::naive_order_quantity(m, s.estimated_demand);
}

}  // namespace

std::string_view policy_kind(const OrderPolicy& policy) {
    return std::holds_alternative<DeterministicOrder>(policy) ? "deterministic" : "stochastic";
}

std::string_view to_string(RhsMode mode) {
    return mode == RhsMode::TheoremAsWritten ? "theorem" : "exact";
}

RhsMode parse_rhs_mode(std::string_view text) {
    if (text == "theorem") return RhsMode::TheoremAsWritten;
    if (text == "exact") return RhsMode::ExactMismatch;
    throw ConfigError("rhs_mode must be 'theorem' or 'exact', got '" + std::string(text) + "'");
}

std::string_view to_string(OrderFamily family) {
    switch (family) {
        case OrderFamily::Uniform: return "uniform";
        case OrderFamily::LogNormal: return "lognormal";
        case OrderFamily::TruncatedNormal: return "truncated_normal";
        case OrderFamily::PointMass: return "point_mass";
    }
    return "unknown";
}

OrderFamily parse_order_family(std::string_view text) {
    if (text == "uniform") return OrderFamily::Uniform;
    if (text == "lognormal") return OrderFamily::LogNormal;
    if (text == "truncated_normal") return OrderFamily::TruncatedNormal;
    if (text == "point_mass") return OrderFamily::PointMass;
    throw ConfigError("unknown order family '" + std::string(text) + "'");
}

namespace order {

double naive_order_quantity(const MarketParams& m, const Distribution& estimated) {
    return bench::optimal_quantity(m, estimated);
}

double expected_profit_stochastic(const MarketParams& m, const Distribution& demand, const OrderPolicy& policy) {
    const auto [order_mean, max_mean] = std::visit(
        overloaded{
            [&](const DeterministicOrder& d) {
                if (!(d.q >= 0.0)) throw DomainError("deterministic order must be >= 0");
                return std::pair{d.q, expected_max(d.q, demand)};
            },
            [&](const StochasticOrder& s) { return std::pair{s.order_dist.mean(), expected_max(s.order_dist, demand)}; },
        },
        policy);
    return m.p * order_mean + m.p * demand.mean() - m.p * max_mean - m.w * order_mean;
}

double baseline_profit(const MarketParams& m, const ScenarioTriple& scenario, RhsMode mode) {
    const double q_hat = q_hat_of(m, scenario);
    const Distribution& compound = scenario.compound_demand;
    if (mode == RhsMode::TheoremAsWritten) return m.p * compound.partial_expectation(q_hat);
    return bench::expected_profit(m, compound, q_hat);
}

FeasibilityReport check_theorem1(const MarketParams& m, const ScenarioTriple& scenario,
                                 const Distribution& order_dist, RhsMode mode) {
    const Distribution& compound = scenario.compound_demand;
    FeasibilityReport r;
    r.check = FeasibilityCheck::Theorem;
    r.rhs_mode = mode;
    r.q_hat_star = q_hat_of(m, scenario);
    r.lhs = order_dist.mean() * m.critical_fractile() + compound.mean() - expected_max(order_dist, compound);
    r.rhs = baseline_profit(m, scenario, mode) / m.p;
    r.margin = r.lhs - r.rhs;
    r.feasible = r.margin >= -kFeasibilityTol;
    r.profit_gap = m.p * r.margin;
    return r;
}

FeasibilityReport check_prop2(const MarketParams& m, const ScenarioTriple& scenario, const Distribution& order_dist) {
    const Distribution& compound = scenario.compound_demand;
    const double q_hat = q_hat_of(m, scenario);
    const double order_mean = order_dist.mean();
    if (std::abs(order_mean - q_hat) > 1e-6 * std::max(1.0, q_hat)) {
        std::ostringstream os;
        os.precision(12);
        os << "moment-constrained check requires E[Q] = " << q_hat << " (the naive order), got E[Q] = " << order_mean;
        throw PreconditionError(os.str());
    }
    FeasibilityReport r;
    r.check = FeasibilityCheck::MomentConstrained;
    r.rhs_mode = RhsMode::ExactMismatch;
    r.q_hat_star = q_hat;
    r.lhs = expected_max(order_dist, compound);
    r.rhs = q_hat * compound.cdf(q_hat) + compound.upper_partial_expectation(q_hat);
    r.margin = r.rhs - r.lhs;
    r.feasible = r.margin >= -kFeasibilityTol;
    r.profit_gap = m.p * r.margin;
    return r;
}

}  // namespace order

// ---------------------------------------------------------------------------
// Candidate construction

std::vector<std::string> free_parameter_names(OrderFamily family, bool constrain_mean) {
    switch (family) {
        case OrderFamily::Uniform:
            return constrain_mean ? std::vector<std::string>{"width"} : std::vector<std::string>{"a", "b"};
        case OrderFamily::LogNormal:
            return constrain_mean ? std::vector<std::string>{"log_sd"}
                                  : std::vector<std::string>{"log_mean", "log_sd"};
        case OrderFamily::TruncatedNormal:
            return constrain_mean ? std::vector<std::string>{"sd"} : std::vector<std::string>{"mean", "sd"};
        case OrderFamily::PointMass:
            if (constrain_mean) {
                throw ConfigError("point_mass has no free parameter once its mean is fixed to the naive order");
            }
            return {"q"};
    }
    return {};
}

namespace {

std::optional<Distribution> point_mass(double centre) {
    if (!(centre >= 0.0) || !std::isfinite(centre)) return std::nullopt;
    const double lo = std::max(0.0, centre - 0.5 * kPointMassWidth);
    return Distribution::uniform(lo, lo + kPointMassWidth);
}

// Location parameter giving mean(make(location)) = target, by bisection on
// a bracket expanded until it straddles the target. mean() is increasing
// in the location for both families this is used with.
template <class Make>
std::optional<Distribution> solve_location(Make make, double target, double guess, double step) {
    auto mean_at = [&](double loc) -> std::optional<double> {
        try {
            return make(loc).mean();
        } catch (const ValidationError&) {
            return std::nullopt;
        }
    };
    double lo = guess - step;
    double hi = guess + step;
    for (int i = 0; i < 200; ++i) {
        auto v = mean_at(hi);
        if (v && *v >= target) break;
        hi += step;
        step *= 2.0;
    }
    step = hi - guess;
    for (int i = 0; i < 200; ++i) {
        auto v = mean_at(lo);
        if (!v) return std::nullopt;  // cannot get low enough while staying valid
        if (*v <= target) break;
        lo -= step;
        step *= 2.0;
    }
    auto lo_mean = mean_at(lo);
    auto hi_mean = mean_at(hi);
    if (!lo_mean || !hi_mean || *lo_mean > target || *hi_mean < target) return std::nullopt;
    for (int i = 0; i < 2000; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        auto v = mean_at(mid);
        if (!v) return std::nullopt;
        if (*v < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double best = std::abs(*mean_at(lo) - target) <= std::abs(*mean_at(hi) - target) ? lo : hi;
    Distribution d = make(best);
    if (std::abs(d.mean() - target) > 1e-10 * std::max(1.0, target)) return std::nullopt;
    return d;
}

}  // namespace

std::optional<Distribution> make_candidate(OrderFamily family, const std::vector<double>& params, bool constrain_mean,
                                           double q_hat) {
    if (params.size() != free_parameter_names(family, constrain_mean).size()) {
        throw ConfigError("wrong number of candidate parameters for " + std::string(to_string(family)));
    }
    for (double v : params)
        if (!std::isfinite(v)) return std::nullopt;

    try {
        switch (family) {
            case OrderFamily::Uniform: {
                double a = params[0];
                double b = constrain_mean ? 0.0 : params[1];
                if (constrain_mean) {
                    const double width = params[0];
                    if (width < 0.0) return std::nullopt;
                    if (width < kPointMassWidth) return point_mass(q_hat);
                    a = q_hat - 0.5 * width;
                    b = q_hat + 0.5 * width;
                    if (a < 0.0) return std::nullopt;
                    return Distribution::uniform(a, b);
                }
                if (b < a || a < 0.0) return std::nullopt;
                if (b - a < kPointMassWidth) return point_mass(0.5 * (a + b));
                return Distribution::uniform(a, b);
            }
            case OrderFamily::LogNormal: {
                if (!constrain_mean) return Distribution::lognormal(params[0], params[1]);
                const double sd = params[0];
                if (!(sd > 0.0) || !(q_hat > 0.0)) return std::nullopt;
                return solve_location([&](double mu) { return Distribution::lognormal(mu, sd); }, q_hat,
                                      std::log(q_hat) - 0.5 * sd * sd, 1.0);
            }
            case OrderFamily::TruncatedNormal: {
                if (!constrain_mean) return Distribution::truncated_normal(params[0], params[1]);
                const double sd = params[0];
                if (!(sd > 0.0) || !(q_hat > 0.0)) return std::nullopt;
                return solve_location([&](double mu) { return Distribution::truncated_normal(mu, sd); }, q_hat, q_hat,
                                      sd);
            }
            case OrderFamily::PointMass:
                return point_mass(params[0]);
        }
    } catch (const ValidationError&) {
        return std::nullopt;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Search

namespace {

std::vector<std::vector<double>> enumerate_candidates(const OrderFamilyTemplate& tmpl, const SearchConfig& cfg,
                                                      std::size_t dims) {
    std::vector<std::vector<double>> out;
    out.reserve(cfg.budget);
    if (cfg.mode == SearchMode::Random) {
        for (std::size_t i = 0; i < cfg.budget; ++i) {
            CounterRng rng(cfg.seed, i);
            std::vector<double> point(dims);
            for (std::size_t j = 0; j < dims; ++j) {
                const auto& b = tmpl.bounds[j];
                point[j] = b.lo + rng.uniform() * (b.hi - b.lo);
            }
            out.push_back(std::move(point));
        }
        return out;
    }

    const auto per_axis = static_cast<std::size_t>(
        std::llround(std::pow(static_cast<double>(cfg.budget), 1.0 / static_cast<double>(dims))));
    std::size_t total = 1;
    for (std::size_t j = 0; j < dims; ++j) total *= per_axis;
    if (total != cfg.budget) {
        throw ConfigError("grid search budget " + std::to_string(cfg.budget) + " is not a perfect power " +
                          std::to_string(dims) + " (one axis per free parameter)");
    }
    auto axis_value = [&](std::size_t j, std::size_t i) {
        const auto& b = tmpl.bounds[j];
        if (per_axis == 1) return 0.5 * (b.lo + b.hi);
        return b.lo + (b.hi - b.lo) * static_cast<double>(i) / static_cast<double>(per_axis - 1);
    };
    std::vector<std::size_t> idx(dims, 0);
    for (std::size_t n = 0; n < total; ++n) {
        std::vector<double> point(dims);
        for (std::size_t j = 0; j < dims; ++j) point[j] = axis_value(j, idx[j]);
        out.push_back(std::move(point));
        for (std::size_t j = dims; j-- > 0;) {
            if (++idx[j] < per_axis) break;
            idx[j] = 0;
        }
    }
    return out;
}

}  // namespace

SearchResult search_policy(const MarketParams& m, const ScenarioTriple& scenario, const OrderFamilyTemplate& tmpl,
                           const SearchConfig& cfg) {
    m.validate();
    if (cfg.budget < 1) throw ConfigError("search.budget must be >= 1");
    const auto names = free_parameter_names(tmpl.family, cfg.constrain_mean_to_qhat);
    if (tmpl.bounds.size() != names.size()) {
        throw ConfigError("order_family.bounds: expected " + std::to_string(names.size()) + " ranges for " +
                          std::string(to_string(tmpl.family)) + (cfg.constrain_mean_to_qhat ? " (mean-constrained)" : ""));
    }
    for (const auto& b : tmpl.bounds) {
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi) {
            throw ConfigError("order_family.bounds: each range must be finite with lo <= hi");
        }
    }

    const auto candidates = enumerate_candidates(tmpl, cfg, names.size());
    const double q_hat = order::naive_order_quantity(m, scenario.estimated_demand);
    // The moment-constrained check is derived from the exact-mismatch baseline.
    const RhsMode mode = cfg.constrain_mean_to_qhat ? RhsMode::ExactMismatch : cfg.rhs_mode;

    SearchResult result;
    result.q_hat_star = q_hat;
    result.baseline_profit = order::baseline_profit(m, scenario, mode);
    result.trace.resize(candidates.size());

    detail::parallel_for(candidates.size(), cfg.threads, [&](std::size_t i) {
        TraceRow& row = result.trace[i];
        row.candidate_id = i;
        row.params = candidates[i];
        auto dist = make_candidate(tmpl.family, candidates[i], cfg.constrain_mean_to_qhat, q_hat);
        if (!dist) {
            row.expected_profit = kNaN;
            row.margin = kNaN;
            row.feasible = false;
            return;
        }
        row.expected_profit =
            order::expected_profit_stochastic(m, scenario.compound_demand, StochasticOrder{*dist});
        const FeasibilityReport rep = cfg.constrain_mean_to_qhat ? order::check_prop2(m, scenario, *dist)
                                                                 : order::check_theorem1(m, scenario, *dist, mode);
        row.margin = rep.margin;
        row.feasible = rep.feasible;
    });

    result.evaluations = candidates.size();
    std::optional<std::size_t> best;
    for (const auto& row : result.trace) {
        if (!row.feasible) continue;
        ++result.feasible_count;
        if (!best || row.expected_profit > result.trace[*best].expected_profit) best = row.candidate_id;
    }

    if (!best) {
        result.best_policy = DeterministicOrder{q_hat};
        result.best_expected_profit = result.baseline_profit;
        result.improvement = 0.0;
        return result;
    }
    const TraceRow& winner = result.trace[*best];
    result.best_policy = StochasticOrder{*make_candidate(tmpl.family, winner.params, cfg.constrain_mean_to_qhat, q_hat)};
    result.best_params = winner.params;
    result.best_expected_profit = winner.expected_profit;
    result.improvement = result.best_expected_profit - result.baseline_profit;
    return result;
}

}  // namespace randopt

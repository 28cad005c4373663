#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "randopt/bench.hpp"
#include "randopt/compound.hpp"
#include "randopt/distribution.hpp"

namespace randopt {

struct DeterministicOrder {
    double q;
};

struct StochasticOrder {
    Distribution order_dist;
};

/// Order quantity fixed in advance, or drawn from G independently of demand.
using OrderPolicy = std::variant<DeterministicOrder, StochasticOrder>;

std::string_view policy_kind(const OrderPolicy& policy);

/// How the benchmark profit of ordering Q-hat under compound demand is read:
/// TheoremAsWritten uses p * int_0^Q-hat t f-hat(t) dt; ExactMismatch uses
/// the expected profit of ordering Q-hat when demand follows F-hat.
enum class RhsMode { TheoremAsWritten, ExactMismatch };

std::string_view to_string(RhsMode mode);
RhsMode parse_rhs_mode(std::string_view text);

enum class FeasibilityCheck { Theorem, MomentConstrained };

/// Signed slack of a feasibility inequality; a positive margin is feasible
/// in both checks.
struct FeasibilityReport {
    FeasibilityCheck check = FeasibilityCheck::Theorem;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool feasible = false;
    double q_hat_star = 0.0;
    RhsMode rhs_mode = RhsMode::ExactMismatch;
    /// p * margin: the expected-profit gain over the baseline.
    double profit_gap = 0.0;
};

inline constexpr double kFeasibilityTol = 1e-10;

namespace order {

/// Q-hat = F-tilde^{-1}(1 - w/p): the order placed using the estimated demand.
double naive_order_quantity(const MarketParams& m, const Distribution& estimated);

/// E[pi_RS] = p E[Q] + p E[D] - p E[max(Q, D)] - w E[Q].
double expected_profit_stochastic(const MarketParams& m, const Distribution& demand, const OrderPolicy& policy);

double baseline_profit(const MarketParams& m, const ScenarioTriple& scenario, RhsMode mode);

/// E[Q](1 - w/p) + E[D] - E[max(Q, D)] >= baseline / p, with D ~ F-hat.
FeasibilityReport check_theorem1(const MarketParams& m, const ScenarioTriple& scenario,
                                 const Distribution& order_dist, RhsMode mode);

/// For E[Q] = Q-hat: E[max(Q, D)] <= Q-hat F-hat(Q-hat) + int_Q-hat^inf t f-hat(t) dt.
/// Throws PreconditionError when |E[Q] - Q-hat| > 1e-6 max(1, Q-hat).
FeasibilityReport check_prop2(const MarketParams& m, const ScenarioTriple& scenario, const Distribution& order_dist);

}  // namespace order

// ---------------------------------------------------------------------------
// Policy search

enum class OrderFamily { Uniform, LogNormal, TruncatedNormal, PointMass };

std::string_view to_string(OrderFamily family);
OrderFamily parse_order_family(std::string_view text);

struct ParamBounds {
    double lo;
    double hi;
};

/// Candidate family for G and the box its free parameters are scanned over.
struct OrderFamilyTemplate {
    OrderFamily family = OrderFamily::Uniform;
    std::vector<ParamBounds> bounds;
};

enum class SearchMode { Grid, Random };

struct SearchConfig {
    SearchMode mode = SearchMode::Grid;
    std::size_t budget = 1;
    std::uint64_t seed = 0;
    bool constrain_mean_to_qhat = false;
    RhsMode rhs_mode = RhsMode::ExactMismatch;
    unsigned threads = 0;  // 0: hardware concurrency
};

struct TraceRow {
    std::size_t candidate_id = 0;
    std::vector<double> params;
    double expected_profit = 0.0;  // NaN when the parameters give no valid distribution
    double margin = 0.0;           // NaN likewise
    bool feasible = false;
};

struct SearchResult {
    OrderPolicy best_policy = DeterministicOrder{0.0};
    std::vector<double> best_params;  // empty when the deterministic fallback is kept
    double best_expected_profit = 0.0;
    double baseline_profit = 0.0;
    double improvement = 0.0;
    double q_hat_star = 0.0;
    std::size_t evaluations = 0;
    std::size_t feasible_count = 0;
    std::vector<TraceRow> trace;
};

/// Width used for point-mass candidates.
inline constexpr double kPointMassWidth = 1e-9;

/// Free parameter names scanned for a family (`width`/`log_sd`/`sd` only
/// when the mean is pinned to Q-hat).
std::vector<std::string> free_parameter_names(OrderFamily family, bool constrain_mean);

/// Order distribution for a candidate, or nullopt when the parameters do
/// not describe a valid distribution on [0, inf) (or the mean constraint
/// cannot be met).
std::optional<Distribution> make_candidate(OrderFamily family, const std::vector<double>& params, bool constrain_mean,
                                           double q_hat);

/// Derivative-free scan over the template's parameter box. Candidates are
/// evaluated independently (in parallel) and recorded in enumeration order.
SearchResult search_policy(const MarketParams& m, const ScenarioTriple& scenario, const OrderFamilyTemplate& family,
                           const SearchConfig& cfg);

}  // namespace randopt

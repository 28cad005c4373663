#pragma once

#include "randopt/distribution.hpp"

namespace randopt {

/// Prices facing the retailer. Salvage value and stockout cost are carried
/// for forward compatibility but must be zero; manufacturing cost never
/// enters the retailer objective.
struct MarketParams {
    double p = 0.0;  // selling price per unit
    double w = 0.0;  // wholesale price per unit
    double s = 0.0;  // salvage value per unit
    double r = 0.0;  // stockout cost per unit
    double c = 0.0;  // manufacturing cost per unit

    /// Throws ValidationError unless 0 < w < p and s = r = 0.
    void validate() const;
    /// w / p, the probability of selling out at the optimum.
    double overage_ratio() const { return w / p; }
    /// 1 - w/p.
    double critical_fractile() const { return 1.0 - w / p; }
};

/// Three independent evaluations of the optimal expected profit.
struct OptimalProfitForms {
    double margin_form;    // Q*(p - w) - p * int_0^Q* F
    double moment_form;    // p * int_0^Q* t f(t) dt
    double survival_form;  // p * int_0^Q* P(D > t) dt - Q* w, by quadrature
};

namespace bench {

/// (p - w) q - p * int_0^q F(t) dt
double expected_profit(const MarketParams& m, const Distribution& demand, double q);

/// p^2 [ int_0^q 2 (q - t) F(t) dt - (int_0^q F)^2 ]
double profit_variance(const MarketParams& m, const Distribution& demand, double q);

/// Critical-fractile order F^{-1}(1 - w/p).
double optimal_quantity(const MarketParams& m, const Distribution& demand);

OptimalProfitForms optimal_profit_forms(const MarketParams& m, const Distribution& demand);

/// Optimal expected profit. For continuous demand all three forms are
/// evaluated and must agree to 1e-7 relative (NumericalIntegrityError
/// otherwise); the moment form is returned. Demand with atoms can leave
/// F(Q*) above the critical fractile, so there the Lemma-1 expected profit
/// at Q* is returned instead.
double optimal_profit(const MarketParams& m, const Distribution& demand);

/// Variance at the optimum using the fractile-substituted closed form,
/// cross-checked against profit_variance(Q*).
double optimal_profit_variance(const MarketParams& m, const Distribution& demand);

/// The fractile-substituted variance expression on its own (no cross-check).
double optimal_profit_variance_closed_form(const MarketParams& m, const Distribution& demand);

}  // namespace bench
}  // namespace randopt

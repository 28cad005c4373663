#include "randopt/bench.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "randopt/errors.hpp"
#include "randopt/quadrature.hpp"

namespace randopt {
namespace {

constexpr double kAgreementTol = 1e-7;

void require_order(double q) {
    if (!(q >= 0.0)) throw DomainError("order quantity must be >= 0");
}

bool agree(double a, double b, double scale) {
    return std::abs(a - b) <= kAgreementTol * std::max({std::abs(a), std::abs(b)}) + 1e-14 * scale;
}

}  // namespace

void MarketParams::validate() const {
    if (!(std::isfinite(p) && std::isfinite(w))) throw ValidationError("market.p and market.w must be finite");
    if (!(w > 0.0)) throw ValidationError("market.w must be > 0");
    if (!(w < p)) throw ValidationError("market.w must be < market.p");
    if (s != 0.0) throw ValidationError("market.s: nonzero salvage value is not yet supported");
    if (r != 0.0) throw ValidationError("market.r: nonzero stockout cost is not yet supported");
    if (!std::isfinite(c) || c < 0.0) throw ValidationError("market.c must be finite and >= 0");
}

namespace bench {

double expected_profit(const MarketParams& m, const Distribution& demand, double q) {
    require_order(q);
    return (m.p - m.w) * q - m.p * demand.integrated_cdf(q);
}

double profit_variance(const MarketParams& m, const Distribution& demand, double q) {
    require_order(q);
    const double ic = demand.integrated_cdf(q);
    const double wic = demand.weighted_integrated_cdf(q);
    // int_0^q 2 (q - t) F(t) dt = 2 (q * IC - WIC)
    const double v = m.p * m.p * (2.0 * (q * ic - wic) - ic * ic);
    return std::max(0.0, v);
}

double optimal_quantity(const MarketParams& m, const Distribution& demand) {
    m.validate();
    return demand.quantile(m.critical_fractile());
}

OptimalProfitForms optimal_profit_forms(const MarketParams& m, const Distribution& demand) {
    const double q = optimal_quantity(m, demand);
    OptimalProfitForms f{};
    f.margin_form = q * (m.p - m.w) - m.p * demand.integrated_cdf(q);
    f.moment_form = m.p * demand.partial_expectation(q);
    const auto bp = demand.breakpoints();
    const auto surv = quad::integrate([&](double t) { return 1.0 - demand.cdf(t); }, 0.0, q, bp);
    f.survival_form = m.p * surv.value - q * m.w;
    return f;
}

double optimal_profit(const MarketParams& m, const Distribution& demand) {
    const double q = optimal_quantity(m, demand);
    if (!demand.is_continuous()) return expected_profit(m, demand, q);

    const OptimalProfitForms f = optimal_profit_forms(m, demand);
    const double scale = m.p * std::max(q, 1.0);
    if (!agree(f.margin_form, f.moment_form, scale) || !agree(f.moment_form, f.survival_form, scale) ||
        !agree(f.margin_form, f.survival_form, scale)) {
        std::ostringstream os;
        os.precision(17);
        os << "optimal profit forms disagree for " << demand.describe() << ": margin=" << f.margin_form
           << " moment=" << f.moment_form << " survival=" << f.survival_form;
        throw NumericalIntegrityError(os.str());
    }
    return f.moment_form;
}

double optimal_profit_variance_closed_form(const MarketParams& m, const Distribution& demand) {
    const double q = optimal_quantity(m, demand);
    const double ratio = m.overage_ratio();
    const double pe = demand.partial_expectation(q);
    const double wic = demand.weighted_integrated_cdf(q);
    const double bracket = q * q * (1.0 - ratio * ratio) - pe * pe - 2.0 * q * ratio * pe - 2.0 * wic;
    return m.p * m.p * bracket;
}

double optimal_profit_variance(const MarketParams& m, const Distribution& demand) {
    const double q = optimal_quantity(m, demand);
    const double direct = profit_variance(m, demand, q);
    if (!demand.is_continuous()) return direct;

    const double closed = std::max(0.0, optimal_profit_variance_closed_form(m, demand));
    const double scale = m.p * m.p * std::max(q * q, 1.0);
    if (!agree(direct, closed, scale)) {
        std::ostringstream os;
        os.precision(17);
        os << "optimal profit variance forms disagree for " << demand.describe() << ": direct=" << direct
           << " closed=" << closed;
        throw NumericalIntegrityError(os.str());
    }
    return closed;
}

}  // namespace bench
}  // namespace randopt

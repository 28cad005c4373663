#include "randopt/compound.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "randopt/errors.hpp"

namespace randopt {

CompoundDemand compound_of(const Distribution& estimated, const std::vector<ParameterUncertainty>& uncertainties,
                           std::size_t nodes) {
    if (nodes < 1) throw ValidationError("compound: nodes must be >= 1");
    if (!estimated.is_parametric()) {
        throw ValidationError("compound: estimated demand must be a parametric family, got " +
                              std::string(family_name(estimated.family())));
    }
    if (uncertainties.empty()) return {estimated, 1, 1, 0.0, {}};

    const std::size_t k = uncertainties.size();
    if (k > kMaxUncertainParameters) {
        throw ComplexityError("compound: at most 3 uncertain parameters are supported");
    }
    double total_nodes = std::pow(static_cast<double>(nodes), static_cast<double>(k));
    if (total_nodes > static_cast<double>(kMaxCompoundComponents)) {
        throw ComplexityError("compound: nodes^k exceeds the cap of 10000 components");
    }

    const auto params = estimated.parameters();
    std::set<std::string> seen;
    for (const auto& u : uncertainties) {
        const bool known = std::any_of(params.begin(), params.end(),
                                       [&](const auto& p) { return p.first == u.parameter_name; });
        if (!known) {
            throw ValidationError("compound: parameter '" + u.parameter_name + "' does not exist in family " +
                                  std::string(family_name(estimated.family())));
        }
        if (!seen.insert(u.parameter_name).second) {
            throw ValidationError("compound: parameter '" + u.parameter_name + "' listed twice");
        }
    }

    // Stratified equal-probability nodes for each uncertain parameter.
    std::vector<std::vector<double>> grid(k);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < nodes; ++i) {
            const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(nodes);
            grid[j].push_back(uncertainties[j].uncertainty.quantile(u));
        }
    }

    const auto count = static_cast<std::size_t>(total_nodes);
    std::vector<Distribution> valid;
    std::vector<std::vector<double>> valid_points;
    std::string first_error;
    std::vector<std::size_t> idx(k, 0);
    for (std::size_t n = 0; n < count; ++n) {
        std::vector<double> point(k);
        for (std::size_t j = 0; j < k; ++j) point[j] = grid[j][idx[j]];
        try {
            Distribution d = estimated;
            for (std::size_t j = 0; j < k; ++j) d = d.with_parameter(uncertainties[j].parameter_name, point[j]);
            valid.push_back(std::move(d));
            valid_points.push_back(std::move(point));
        } catch (const ValidationError& e) {
            if (first_error.empty()) first_error = e.what();
        }
        // Odometer over the Cartesian product, last parameter fastest.
        for (std::size_t j = k; j-- > 0;) {
            if (++idx[j] < nodes) break;
            idx[j] = 0;
        }
    }

    CompoundDemand out{estimated, count, valid.size(), 0.0, {}};
    out.rejected_fraction = 1.0 - static_cast<double>(valid.size()) / static_cast<double>(count);
    if (valid.empty()) {
        throw ValidationError("compound: every parameter node is invalid for the family (" + first_error + ")");
    }
    if (out.rejected_fraction >= 0.5) {
        throw ValidationError("compound: " + std::to_string(count - valid.size()) + " of " + std::to_string(count) +
                              " parameter nodes are invalid (" + first_error + ")");
    }
    if (valid.size() < count) {
        out.warnings.push_back("compound: dropped " + std::to_string(count - valid.size()) + " of " +
                               std::to_string(count) + " invalid parameter nodes (" + first_error +
                               "); weights renormalised");
    }

    const bool degenerate = std::all_of(valid_points.begin(), valid_points.end(),
                                        [&](const auto& p) { return p == valid_points.front(); });
    if (degenerate) {
        out.distribution = valid.front();
        return out;
    }

    const double w = 1.0 / static_cast<double>(valid.size());
    std::vector<std::pair<double, Distribution>> parts;
    parts.reserve(valid.size());
    double total = 0.0;
    for (auto& d : valid) {
        parts.emplace_back(w, std::move(d));
        total += w;
    }
    parts.back().first += 1.0 - total;
    out.distribution = Distribution::mixture(std::move(parts));
    return out;
}

ScenarioTriple make_scenario(const Distribution& estimated, const Distribution& compound,
                             const Distribution* true_demand) {
    return {true_demand ? *true_demand : estimated, estimated, compound};
}

}  // namespace randopt

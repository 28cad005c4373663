#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "randopt/distribution.hpp"

namespace randopt {

/// Uncertainty about one parameter of the estimated demand family.
struct ParameterUncertainty {
    std::string parameter_name;
    Distribution uncertainty;
};

/// Compound demand: the estimated family integrated over its parameter
/// uncertainties, discretised into a finite mixture.
struct CompoundDemand {
    Distribution distribution;
    std::size_t nodes_total = 0;      // nodes^k parameter combinations tried
    std::size_t components = 0;       // valid combinations kept
    double rejected_fraction = 0.0;   // share of combinations dropped as invalid
    std::vector<std::string> warnings;
};

/// True, estimated and compound demand for one scenario.
struct ScenarioTriple {
    Distribution true_demand;
    Distribution estimated_demand;
    Distribution compound_demand;
};

inline constexpr std::size_t kMaxUncertainParameters = 3;
inline constexpr std::size_t kMaxCompoundComponents = 10000;

/// Discretises each uncertainty at its quantiles (i - 0.5) / nodes and
/// forms the equal-weight mixture over the Cartesian product. Parameter
/// draws that do not give a valid distribution are dropped and the rest
/// renormalised; if half or more are dropped construction fails. With no
/// uncertainties the estimated distribution is returned as is, and when
/// every node coincides the single resulting distribution is returned
/// without a mixture wrapper. Refining `nodes` converges quickly for
/// bounded uncertainties but only at about 1/nodes when an uncertainty has
/// unbounded tails.
CompoundDemand compound_of(const Distribution& estimated, const std::vector<ParameterUncertainty>& uncertainties,
                           std::size_t nodes);

/// Builds a triple; a missing true demand defaults to the estimated one.
ScenarioTriple make_scenario(const Distribution& estimated, const Distribution& compound,
                             const Distribution* true_demand = nullptr);

}  // namespace randopt

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "randopt/bench.hpp"
#include "randopt/compound.hpp"
#include "randopt/io.hpp"
#include "randopt/order_policy.hpp"
#include "randopt/simulation.hpp"

namespace randopt {

/// Everything a CLI run needs, as read from one scenario document.
struct Scenario {
    MarketParams market;
    std::optional<Distribution> true_demand;  // absent: same as estimated
    Distribution estimated_demand = Distribution::uniform(0.0, 1.0);
    std::vector<ParameterUncertainty> parameter_uncertainties;
    std::size_t compound_nodes = 64;
    std::optional<OrderFamilyTemplate> order_family;
    SearchConfig search;
    mc::SimConfig sim;
    RhsMode rhs_mode = RhsMode::ExactMismatch;
};

namespace io {

/// Parses and validates a scenario document; relative sample paths are
/// resolved against `base_dir`. Throws SchemaError naming the field.
Scenario scenario_from_json(const Json& j, const std::filesystem::path& base_dir = {});

/// Reads a scenario file. Throws std::filesystem::filesystem_error when the
/// file cannot be opened and SchemaError on malformed content.
Scenario load_scenario(const std::filesystem::path& file);

/// Normalised form: every default filled in, samples inlined.
Json to_json(const Scenario& s);

}  // namespace io
}  // namespace randopt

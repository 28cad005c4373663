#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "randopt/compound.hpp"
#include "randopt/distribution.hpp"
#include "randopt/order_policy.hpp"
#include "randopt/simulation.hpp"

namespace randopt::io {

using Json = nlohmann::ordered_json;

/// Schema violation in a scenario or distribution record; `path()` names
/// the offending field, e.g. "market.w".
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

/// Distribution record, e.g. {"family": "uniform", "lo": 0.0, "hi": 1.0}.
/// Empirical samples are inline ("values") or a one-column CSV ("path",
/// resolved against `base_dir`). Any record may add "upper" to truncate.
Distribution distribution_from_json(const Json& j, const std::filesystem::path& base_dir = {},
                                    const std::string& path = "dist");
Json to_json(const Distribution& d);

/// One-column CSV of non-negative values; a non-numeric first line is
/// treated as a header.
std::vector<double> read_sample_csv(const std::filesystem::path& file);

Json to_json(const OrderPolicy& policy);
Json to_json(const FeasibilityReport& report);
Json to_json(const mc::SimReport& report);
Json to_json(const SearchResult& result, bool include_trace = true);

/// candidate_id,param_1,param_2,expected_profit,margin,feasible
void write_trace_csv(std::ostream& out, const SearchResult& result);

/// Shortest round-trip decimal form ("nan"/"inf" for non-finite values).
std::string format_number(double x);

}  // namespace randopt::io

#include "randopt/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "randopt/errors.hpp"

namespace randopt::io {
namespace {

void check_keys(const Json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || item.key() == a;
        if (!ok) throw SchemaError(path + "." + item.key(), "unknown field");
    }
}

double number_at(const Json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) throw SchemaError(path + "." + key, "required field missing");
    const Json& v = j.at(key);
    if (!v.is_number()) throw SchemaError(path + "." + key, "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw SchemaError(path + "." + key, "must be finite");
    return x;
}

Distribution leaf_from_json(const Json& j, const std::filesystem::path& base_dir, const std::string& path,
                            const std::string& family) {
    if (family == "uniform") {
        check_keys(j, path, {"family", "lo", "hi", "upper"});
        return Distribution::uniform(number_at(j, "lo", path), number_at(j, "hi", path));
    }
    if (family == "exponential") {
        check_keys(j, path, {"family", "rate", "upper"});
        return Distribution::exponential(number_at(j, "rate", path));
    }
    if (family == "lognormal") {
        check_keys(j, path, {"family", "log_mean", "log_sd", "upper"});
        return Distribution::lognormal(number_at(j, "log_mean", path), number_at(j, "log_sd", path));
    }
    if (family == "truncated_normal") {
        check_keys(j, path, {"family", "mean", "sd", "upper"});
        return Distribution::truncated_normal(number_at(j, "mean", path), number_at(j, "sd", path));
    }
    if (family == "empirical") {
        check_keys(j, path, {"family", "values", "path", "upper"});
        if (j.contains("values") == j.contains("path")) {
            throw SchemaError(path, "empirical needs exactly one of 'values' or 'path'");
        }
        if (j.contains("values")) {
            const Json& v = j.at("values");
            if (!v.is_array()) throw SchemaError(path + ".values", "must be an array of numbers");
            std::vector<double> values;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (!v[i].is_number()) {
                    throw SchemaError(path + ".values[" + std::to_string(i) + "]", "must be a number");
                }
                values.push_back(v[i].get<double>());
            }
            return Distribution::empirical(std::move(values));
        }
        if (!j.at("path").is_string()) throw SchemaError(path + ".path", "must be a string");
        std::filesystem::path file = j.at("path").get<std::string>();
        if (file.is_relative()) file = base_dir / file;
        try {
            return Distribution::empirical(read_sample_csv(file));
        } catch (const std::runtime_error& e) {
            throw SchemaError(path + ".path", e.what());
        }
    }
    if (family == "mixture") {
        check_keys(j, path, {"family", "components", "upper"});
        if (!j.contains("components") || !j.at("components").is_array()) {
            throw SchemaError(path + ".components", "must be an array");
        }
        std::vector<std::pair<double, Distribution>> parts;
        const Json& comps = j.at("components");
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const std::string cpath = path + ".components[" + std::to_string(i) + "]";
            if (!comps[i].is_object()) throw SchemaError(cpath, "must be an object");
            check_keys(comps[i], cpath, {"weight", "dist"});
            if (!comps[i].contains("dist")) throw SchemaError(cpath + ".dist", "required field missing");
            parts.emplace_back(number_at(comps[i], "weight", cpath),
                               distribution_from_json(comps[i].at("dist"), base_dir, cpath + ".dist"));
        }
        return Distribution::mixture(std::move(parts));
    }
    throw SchemaError(path + ".family", "unknown family '" + family + "'");
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::vector<double> read_sample_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open sample file " + file.string());
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t,");
        const std::string cell = line.substr(first, last - first + 1);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc() || ptr != cell.data() + cell.size()) {
            if (values.empty() && line_no == 1) continue;  // header
            throw std::runtime_error(file.string() + ":" + std::to_string(line_no) + ": not a number");
        }
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::runtime_error(file.string() + ":" + std::to_string(line_no) + ": sample values must be >= 0");
        }
        values.push_back(v);
    }
    if (values.empty()) throw std::runtime_error(file.string() + ": no sample values");
    return values;
}

Distribution distribution_from_json(const Json& j, const std::filesystem::path& base_dir, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path, "distribution record must be an object");
    if (!j.contains("family") || !j.at("family").is_string()) {
        throw SchemaError(path + ".family", "required string field missing");
    }
    const std::string family = j.at("family").get<std::string>();
    try {
        Distribution d = leaf_from_json(j, base_dir, path, family);
        if (j.contains("upper")) d = d.truncated_above(number_at(j, "upper", path));
        return d;
    } catch (const ValidationError& e) {
        throw SchemaError(path, e.what());
    }
}

Json to_json(const Distribution& d) {
    Json j;
    j["family"] = std::string(family_name(d.family()));
    switch (d.family()) {
        case Family::Empirical: {
            Json values = Json::array();
            for (double v : d.sample_values()) values.push_back(v);
            j["values"] = values;
            break;
        }
        case Family::Mixture: {
            Json comps = Json::array();
            for (const auto& c : d.components()) comps.push_back(Json{{"weight", c.weight}, {"dist", to_json(*c.dist)}});
            j["components"] = comps;
            break;
        }
        default:
            for (const auto& [name, value] : d.parameters()) j[name] = value;
            break;
    }
    if (d.upper_bound()) j["upper"] = *d.upper_bound();
    return j;
}

Json to_json(const OrderPolicy& policy) {
    Json j;
    j["kind"] = std::string(policy_kind(policy));
    if (const auto* det = std::get_if<DeterministicOrder>(&policy)) {
        j["q"] = det->q;
    } else {
        j["order_dist"] = to_json(std::get<StochasticOrder>(policy).order_dist);
    }
    return j;
}

Json to_json(const FeasibilityReport& r) {
    Json j;
    j["check"] = r.check == FeasibilityCheck::Theorem ? "theorem" : "moment_constrained";
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["margin"] = r.margin;
    j["feasible"] = r.feasible;
    j["q_hat_star"] = r.q_hat_star;
    j["rhs_mode"] = std::string(to_string(r.rhs_mode));
    j["profit_gap"] = r.profit_gap;
    return j;
}

Json to_json(const mc::SimReport& r) {
    Json j;
    j["mean"] = r.mean;
    j["variance"] = r.variance;
    j["std_error"] = r.std_error;
    j["n"] = r.n;
    j["ci95"] = Json::array({r.ci95_lo, r.ci95_hi});
    j["variance_std_error"] = r.variance_std_error;
    return j;
}

Json to_json(const SearchResult& r, bool include_trace) {
    Json j;
    j["best_policy"] = to_json(r.best_policy);
    j["best_params"] = r.best_params;
    j["best_expected_profit"] = r.best_expected_profit;
    j["baseline_profit"] = r.baseline_profit;
    j["improvement"] = r.improvement;
    j["q_hat_star"] = r.q_hat_star;
    j["evaluations"] = r.evaluations;
    j["feasible_count"] = r.feasible_count;
    if (include_trace) {
        Json trace = Json::array();
        for (const auto& row : r.trace) {
            // NaN entries (invalid candidates) serialise as null.
            trace.push_back(Json{{"candidate_id", row.candidate_id},
                                 {"params", row.params},
                                 {"expected_profit", row.expected_profit},
                                 {"margin", row.margin},
                                 {"feasible", row.feasible}});
        }
        j["trace"] = trace;
    }
    return j;
}

void write_trace_csv(std::ostream& out, const SearchResult& result) {
    out << "candidate_id,param_1,param_2,expected_profit,margin,feasible\n";
    for (const auto& row : result.trace) {
        out << row.candidate_id << ',';
        out << (row.params.size() > 0 ? format_number(row.params[0]) : "") << ',';
        out << (row.params.size() > 1 ? format_number(row.params[1]) : "") << ',';
        out << format_number(row.expected_profit) << ',' << format_number(row.margin) << ','
            << (row.feasible ? 1 : 0) << '\n';
    }
}

}  // namespace randopt::io

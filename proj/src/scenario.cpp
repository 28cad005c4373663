#include "randopt/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "randopt/errors.hpp"

namespace randopt::io {
namespace {

void check_keys(const Json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || item.key() == a;
        if (!ok) throw SchemaError(path.empty() ? item.key() : path + "." + item.key(), "unknown field");
    }
}

const Json* optional_object(const Json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key) || j.at(key).is_null()) return nullptr;
    if (!j.at(key).is_object()) throw SchemaError(path, "must be an object");
    return &j.at(key);
}

double number_or(const Json& j, const std::string& key, const std::string& path, double fallback) {
    if (!j.contains(key)) return fallback;
    const Json& v = j.at(key);
    if (!v.is_number() || !std::isfinite(v.get<double>())) throw SchemaError(path, "must be a finite number");
    return v.get<double>();
}

std::uint64_t count_or(const Json& j, const std::string& key, const std::string& path, std::uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    const Json& v = j.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        if (v.get<std::int64_t>() < 0) throw SchemaError(path, "must be a non-negative integer");
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    if (v.is_number_float()) {
        const double x = v.get<double>();
        if (x >= 0.0 && x == std::floor(x) && x < 1.8e19) return static_cast<std::uint64_t>(x);
    }
    throw SchemaError(path, "must be a non-negative integer");
}

bool bool_or(const Json& j, const std::string& key, const std::string& path, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean()) throw SchemaError(path, "must be true or false");
    return j.at(key).get<bool>();
}

std::string string_or(const Json& j, const std::string& key, const std::string& path, std::string fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_string()) throw SchemaError(path, "must be a string");
    return j.at(key).get<std::string>();
}

MarketParams parse_market(const Json& j) {
    if (!j.contains("market") || !j.at("market").is_object()) throw SchemaError("market", "required object missing");
    const Json& mj = j.at("market");
    check_keys(mj, "market", {"p", "w", "s", "r", "c"});
    for (const char* key : {"p", "w"}) {
        if (!mj.contains(key)) throw SchemaError(std::string("market.") + key, "required field missing");
    }
    MarketParams m;
    m.p = number_or(mj, "p", "market.p", 0.0);
    m.w = number_or(mj, "w", "market.w", 0.0);
    m.s = number_or(mj, "s", "market.s", 0.0);
    m.r = number_or(mj, "r", "market.r", 0.0);
    m.c = number_or(mj, "c", "market.c", 0.0);
    if (!(m.p > 0.0)) throw SchemaError("market.p", "must be > 0");
    if (!(m.w > 0.0)) throw SchemaError("market.w", "must be > 0");
    if (!(m.w < m.p)) throw SchemaError("market.w", "must be < market.p");
    if (m.s != 0.0) throw SchemaError("market.s", "nonzero salvage value is not yet supported");
    if (m.r != 0.0) throw SchemaError("market.r", "nonzero stockout cost is not yet supported");
    if (m.c < 0.0) throw SchemaError("market.c", "must be >= 0");
    return m;
}

OrderFamilyTemplate parse_order_family(const Json& j) {
    check_keys(j, "order_family", {"family", "bounds"});
    OrderFamilyTemplate t;
    try {
        t.family = randopt::parse_order_family(string_or(j, "family", "order_family.family", "uniform"));
    } catch (const ConfigError& e) {
        throw SchemaError("order_family.family", e.what());
    }
    if (!j.contains("bounds") || !j.at("bounds").is_array()) {
        throw SchemaError("order_family.bounds", "required array of [lo, hi] pairs");
    }
    const Json& b = j.at("bounds");
    for (std::size_t i = 0; i < b.size(); ++i) {
        const std::string path = "order_family.bounds[" + std::to_string(i) + "]";
        if (!b[i].is_array() || b[i].size() != 2 || !b[i][0].is_number() || !b[i][1].is_number()) {
            throw SchemaError(path, "must be a [lo, hi] pair of numbers");
        }
        const ParamBounds pb{b[i][0].get<double>(), b[i][1].get<double>()};
        if (!std::isfinite(pb.lo) || !std::isfinite(pb.hi) || pb.lo > pb.hi) {
            throw SchemaError(path, "must be finite with lo <= hi");
        }
        t.bounds.push_back(pb);
    }
    return t;
}

}  // namespace

Scenario scenario_from_json(const Json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw SchemaError("scenario", "document must be a JSON object");
    check_keys(j, "", {"market", "true_demand", "estimated_demand", "parameter_uncertainties", "compound_nodes",
                       "order_family", "search", "sim", "rhs_mode"});
    Scenario s;
    s.market = parse_market(j);

    if (!j.contains("estimated_demand")) throw SchemaError("estimated_demand", "required field missing");
    s.estimated_demand = distribution_from_json(j.at("estimated_demand"), base_dir, "estimated_demand");
    if (j.contains("true_demand") && !j.at("true_demand").is_null()) {
        s.true_demand = distribution_from_json(j.at("true_demand"), base_dir, "true_demand");
    }

    if (j.contains("parameter_uncertainties")) {
        const Json& pu = j.at("parameter_uncertainties");
        if (!pu.is_array()) throw SchemaError("parameter_uncertainties", "must be an array");
        for (std::size_t i = 0; i < pu.size(); ++i) {
            const std::string path = "parameter_uncertainties[" + std::to_string(i) + "]";
            if (!pu[i].is_object()) throw SchemaError(path, "must be an object");
            check_keys(pu[i], path, {"param", "dist"});
            if (!pu[i].contains("param") || !pu[i].at("param").is_string()) {
                throw SchemaError(path + ".param", "required string field missing");
            }
            if (!pu[i].contains("dist")) throw SchemaError(path + ".dist", "required field missing");
            s.parameter_uncertainties.push_back(
                {pu[i].at("param").get<std::string>(), distribution_from_json(pu[i].at("dist"), base_dir, path + ".dist")});
        }
    }
    s.compound_nodes = count_or(j, "compound_nodes", "compound_nodes", 64);
    if (s.compound_nodes < 1) throw SchemaError("compound_nodes", "must be >= 1");

    if (const Json* of = optional_object(j, "order_family", "order_family")) s.order_family = parse_order_family(*of);

    try {
        s.rhs_mode = parse_rhs_mode(string_or(j, "rhs_mode", "rhs_mode", "exact"));
    } catch (const ConfigError& e) {
        throw SchemaError("rhs_mode", e.what());
    }

    if (const Json* sj = optional_object(j, "search", "search")) {
        check_keys(*sj, "search", {"mode", "budget", "seed", "constrain_mean_to_qhat"});
        const std::string mode = string_or(*sj, "mode", "search.mode", "grid");
        if (mode == "grid") {
            s.search.mode = SearchMode::Grid;
        } else if (mode == "random") {
            s.search.mode = SearchMode::Random;
        } else {
            throw SchemaError("search.mode", "must be 'grid' or 'random'");
        }
        s.search.budget = count_or(*sj, "budget", "search.budget", 1024);
        s.search.seed = count_or(*sj, "seed", "search.seed", 0);
        s.search.constrain_mean_to_qhat = bool_or(*sj, "constrain_mean_to_qhat", "search.constrain_mean_to_qhat", false);
    } else {
        s.search.budget = 1024;
    }
    if (s.search.budget < 1) throw SchemaError("search.budget", "must be >= 1");
    s.search.rhs_mode = s.rhs_mode;

    if (const Json* mj = optional_object(j, "sim", "sim")) {
        check_keys(*mj, "sim", {"n_draws", "seed", "batch_size", "antithetic"});
        s.sim.n_draws = count_or(*mj, "n_draws", "sim.n_draws", s.sim.n_draws);
        s.sim.seed = count_or(*mj, "seed", "sim.seed", s.sim.seed);
        s.sim.batch_size = count_or(*mj, "batch_size", "sim.batch_size", s.sim.batch_size);
        s.sim.antithetic = bool_or(*mj, "antithetic", "sim.antithetic", s.sim.antithetic);
    }
    try {
        s.sim.validate();
    } catch (const ConfigError& e) {
        throw SchemaError("sim", e.what());
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw std::filesystem::filesystem_error("cannot open scenario", file,
                                                std::make_error_code(std::errc::no_such_file_or_directory));
    }
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("scenario", std::string("malformed JSON: ") + e.what());
    }
    return scenario_from_json(j, file.parent_path());
}

Json to_json(const Scenario& s) {
    Json j;
    j["market"] = Json{{"p", s.market.p}, {"w", s.market.w}, {"s", s.market.s}, {"r", s.market.r}, {"c", s.market.c}};
    j["true_demand"] = s.true_demand ? to_json(*s.true_demand) : Json(nullptr);
    j["estimated_demand"] = to_json(s.estimated_demand);
    Json pu = Json::array();
    for (const auto& u : s.parameter_uncertainties) pu.push_back(Json{{"param", u.parameter_name}, {"dist", to_json(u.uncertainty)}});
    j["parameter_uncertainties"] = pu;
    j["compound_nodes"] = s.compound_nodes;
    if (s.order_family) {
        Json bounds = Json::array();
        for (const auto& b : s.order_family->bounds) bounds.push_back(Json::array({b.lo, b.hi}));
        j["order_family"] = Json{{"family", std::string(to_string(s.order_family->family))}, {"bounds", bounds}};
    } else {
        j["order_family"] = nullptr;
    }
    j["search"] = Json{{"mode", s.search.mode == SearchMode::Grid ? "grid" : "random"},
                       {"budget", s.search.budget},
                       {"seed", s.search.seed},
                       {"constrain_mean_to_qhat", s.search.constrain_mean_to_qhat}};
    j["sim"] = Json{{"n_draws", s.sim.n_draws},
                    {"seed", s.sim.seed},
                    {"batch_size", s.sim.batch_size},
                    {"antithetic", s.sim.antithetic}};
    j["rhs_mode"] = std::string(to_string(s.rhs_mode));
    return j;
}

}  // namespace randopt::io

#include "randopt/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "randopt/bench.hpp"
#include "randopt/compound.hpp"
#include "randopt/errors.hpp"
#include "randopt/io.hpp"
#include "randopt/order_policy.hpp"
#include "randopt/scenario.hpp"
#include "randopt/simulation.hpp"

namespace randopt::cli {
namespace {

using io::Json;

constexpr double kZThreshold = 4.0;

struct Options {
    std::string scenario_path;
    std::string json_path;
    std::string trace_path;
    std::string normalized_path;
    std::string compound_path;
    std::string rhs_mode;
    double inject_bias = 0.0;
    unsigned threads = 0;
};

// Filesystem problems on output paths map to the missing-file exit code.
class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw OutputError("cannot write " + path);
    out << content;
    if (!out) throw OutputError("cannot write " + path);
}

struct Loaded {
    Scenario scenario;
    ScenarioTriple triple;
};

Loaded load(const Options& opt, std::ostream& err) {
    Scenario s = io::load_scenario(opt.scenario_path);
    if (!opt.rhs_mode.empty()) {
        s.rhs_mode = parse_rhs_mode(opt.rhs_mode);
        s.search.rhs_mode = s.rhs_mode;
    }
    s.search.threads = opt.threads;
    s.sim.threads = opt.threads;

    CompoundDemand compound = [&] {
        try {
            return compound_of(s.estimated_demand, s.parameter_uncertainties, s.compound_nodes);
        } catch (const ValidationError& e) {
            throw io::SchemaError("parameter_uncertainties", e.what());
        } catch (const ComplexityError& e) {
            throw io::SchemaError("parameter_uncertainties", e.what());
        }
    }();
    for (const auto& w : compound.warnings) err << "warning: " << w << "\n";

    if (!opt.normalized_path.empty()) write_file(opt.normalized_path, io::to_json(s).dump(2) + "\n");
    if (!opt.compound_path.empty()) write_file(opt.compound_path, io::to_json(compound.distribution).dump(2) + "\n");

    ScenarioTriple triple = make_scenario(s.estimated_demand, compound.distribution,
                                          s.true_demand ? &*s.true_demand : nullptr);
    return {std::move(s), std::move(triple)};
}

Json demand_block(const MarketParams& m, const Distribution& d) {
    Json j;
    j["distribution"] = d.describe();
    j["q_star"] = bench::optimal_quantity(m, d);
    j["optimal_profit"] = bench::optimal_profit(m, d);
    j["optimal_profit_variance"] = bench::optimal_profit_variance(m, d);
    return j;
}

void print_block(std::ostream& out, const std::string& label, const Json& b) {
    out << label << ": " << b["distribution"].get<std::string>() << "\n"
        << "  Q*                 = " << b["q_star"].get<double>() << "\n"
        << "  optimal profit     = " << b["optimal_profit"].get<double>() << "\n"
        << "  optimal variance   = " << b["optimal_profit_variance"].get<double>() << "\n";
}

int cmd_solve(const Options& opt, std::ostream& out, std::ostream& err) {
    auto [s, triple] = load(opt, err);
    const MarketParams& m = s.market;
    const double q_hat = order::naive_order_quantity(m, triple.estimated_demand);

    Json report;
    report["command"] = "solve";
    report["q_hat_star"] = q_hat;
    report["baseline_profit"] = Json{{"theorem", order::baseline_profit(m, triple, RhsMode::TheoremAsWritten)},
                                     {"exact", order::baseline_profit(m, triple, RhsMode::ExactMismatch)}};
    report["estimated"] = demand_block(m, triple.estimated_demand);
    report["compound"] = demand_block(m, triple.compound_demand);
    Json truth = demand_block(m, triple.true_demand);
    truth["source"] = s.true_demand ? "given" : "= estimated";
    report["true"] = truth;

    out << std::setprecision(10);
    out << "naive order Q-hat*     = " << q_hat << "\n"
        << "baseline profit (exact)   = " << report["baseline_profit"]["exact"].get<double>() << "\n"
        << "baseline profit (theorem) = " << report["baseline_profit"]["theorem"].get<double>() << "\n";
    print_block(out, "estimated demand", report["estimated"]);
    print_block(out, "compound demand", report["compound"]);
    if (s.true_demand) {
        print_block(out, "true demand", report["true"]);
    } else {
        out << "true demand: = estimated\n";
    }

    if (!opt.json_path.empty()) write_file(opt.json_path, report.dump(2) + "\n");
    return kOk;
}

int cmd_search(const Options& opt, std::ostream& out, std::ostream& err) {
    auto [s, triple] = load(opt, err);
    if (!s.order_family) throw io::SchemaError("order_family", "required for search");
    const SearchResult r = search_policy(s.market, triple, *s.order_family, s.search);

    out << std::setprecision(10);
    out << "evaluated " << r.evaluations << " candidates, " << r.feasible_count << " feasible\n"
        << "baseline profit (" << to_string(s.search.constrain_mean_to_qhat ? RhsMode::ExactMismatch : s.rhs_mode)
        << ") = " << r.baseline_profit << "\n";
    if (const auto* det = std::get_if<DeterministicOrder>(&r.best_policy)) {
        out << "best policy: deterministic q = " << det->q << "\n";
    } else {
        const auto names = free_parameter_names(s.order_family->family, s.search.constrain_mean_to_qhat);
        out << "best policy: " << std::get<StochasticOrder>(r.best_policy).order_dist.describe() << " [";
        for (std::size_t i = 0; i < names.size(); ++i) out << (i ? ", " : "") << names[i] << "=" << r.best_params[i];
        out << "]\n";
    }
    out << "best expected profit = " << r.best_expected_profit << "\n"
        << "improvement          = " << r.improvement << "\n";
    if (std::holds_alternative<DeterministicOrder>(r.best_policy) || r.improvement <= 1e-6) {
        out << "deterministic optimum retained\n";
    }

    if (!opt.trace_path.empty()) {
        std::ostringstream csv;
        io::write_trace_csv(csv, r);
        write_file(opt.trace_path, csv.str());
    }
    if (!opt.json_path.empty()) {
        Json report;
        report["command"] = "search";
        report["order_family"] = std::string(to_string(s.order_family->family));
        report["constrain_mean_to_qhat"] = s.search.constrain_mean_to_qhat;
        report["rhs_mode"] = std::string(to_string(s.rhs_mode));
        report["result"] = io::to_json(r);
        write_file(opt.json_path, report.dump(2) + "\n");
    }
    return kOk;
}

struct Row {
    std::string name;
    double analytic;
    double simulated;
    double std_error;
    double z;
};

mc::SimConfig row_config(const mc::SimConfig& base, std::uint64_t row) {
    mc::SimConfig c = base;
    c.seed = base.seed ^ mix64(row + 1);
    return c;
}

int cmd_validate(const Options& opt, std::ostream& out, std::ostream& err) {
    auto [s, triple] = load(opt, err);
    const MarketParams& m = s.market;
    const Distribution& demand = triple.compound_demand;
    const double q_hat = order::naive_order_quantity(m, triple.estimated_demand);
    const double q_star = bench::optimal_quantity(m, demand);

    // The configured family's midpoint candidate; without a family, a
    // uniform spread of +/-50% around the naive order.
    Distribution order_dist = Distribution::uniform(0.5 * q_hat, 1.5 * q_hat);
    if (s.order_family) {
        std::vector<double> mid;
        for (const auto& b : s.order_family->bounds) mid.push_back(0.5 * (b.lo + b.hi));
        auto cand = make_candidate(s.order_family->family, mid, s.search.constrain_mean_to_qhat, q_hat);
        if (!cand) throw io::SchemaError("order_family.bounds", "midpoint candidate is not a valid distribution");
        order_dist = *cand;
    }

    std::vector<Row> rows;
    auto add = [&](std::string name, double analytic, double simulated, double se) {
        analytic += opt.inject_bias;
        const double diff = std::abs(analytic - simulated);
        const double z = se > 0.0 ? diff / se : (diff <= 1e-12 * std::max(1.0, std::abs(analytic)) ? 0.0 : INFINITY);
        rows.push_back({std::move(name), analytic, simulated, se, z});
    };

    mc::SimConfig plain = s.sim;
    plain.antithetic = false;
    const mc::SimReport at_qhat = mc::simulate_profit(m, demand, DeterministicOrder{q_hat}, row_config(s.sim, 0));
    add("expected_profit(Q-hat*)", bench::expected_profit(m, demand, q_hat), at_qhat.mean, at_qhat.std_error);

    const mc::SimReport at_opt = mc::simulate_profit(m, demand, DeterministicOrder{q_star}, row_config(s.sim, 1));
    add("optimal_profit", bench::optimal_profit(m, demand), at_opt.mean, at_opt.std_error);

    const mc::SimReport var_run = mc::simulate_profit(m, demand, DeterministicOrder{q_hat}, row_config(plain, 2));
    add("profit_variance(Q-hat*)", bench::profit_variance(m, demand, q_hat), var_run.variance,
        var_run.variance_std_error);

    const mc::SimReport stoch = mc::simulate_profit(m, demand, StochasticOrder{order_dist}, row_config(s.sim, 3));
    add("expected_profit_stochastic", order::expected_profit_stochastic(m, demand, StochasticOrder{order_dist}),
        stoch.mean, stoch.std_error);

    const mc::SimReport emax = mc::simulate_expected_max(order_dist, demand, row_config(s.sim, 4));
    add("expected_max(G, F-hat)", expected_max(order_dist, demand), emax.mean, emax.std_error);

    bool all_pass = true;
    out << std::setprecision(10);
    out << "order distribution: " << order_dist.describe() << "; n_draws = " << s.sim.n_draws << "\n";
    out << std::left << std::setw(30) << "quantity" << std::setw(18) << "analytic" << std::setw(18) << "monte_carlo"
        << std::setw(16) << "std_error" << std::setw(10) << "|z|"
        << "result\n";
    Json jrows = Json::array();
    for (const auto& r : rows) {
        const bool pass = r.z <= kZThreshold;
        all_pass = all_pass && pass;
        out << std::setw(30) << r.name << std::setw(18) << r.analytic << std::setw(18) << r.simulated << std::setw(16)
            << r.std_error << std::setw(10) << std::setprecision(4) << r.z << std::setprecision(10)
            << (pass ? "PASS" : "FAIL") << "\n";
        jrows.push_back(Json{{"quantity", r.name},
                             {"analytic", r.analytic},
                             {"monte_carlo", r.simulated},
                             {"std_error", r.std_error},
                             {"z", r.z},
                             {"pass", pass}});
    }
    out << (all_pass ? "all checks passed" : "validation FAILED") << "\n";

    if (!opt.json_path.empty()) {
        Json report;
        report["command"] = "validate";
        report["order_dist"] = io::to_json(order_dist);
        report["sim"] = io::to_json(s).at("sim");
        report["z_threshold"] = kZThreshold;
        report["rows"] = jrows;
        report["pass"] = all_pass;
        write_file(opt.json_path, report.dump(2) + "\n");
    }
    return all_pass ? kOk : kValidationFailure;
}

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("scenario", opt.scenario_path, "Scenario file (JSON)")->required();
    cmd->add_option("--json", opt.json_path, "Write the machine-readable report here");
    cmd->add_option("--dump-normalized", opt.normalized_path, "Write the normalised scenario here");
    cmd->add_option("--dump-compound", opt.compound_path, "Write the compound demand mixture here");
    cmd->add_option("--rhs-mode", opt.rhs_mode, "Baseline reading: theorem | exact")
        ->check(CLI::IsMember({"theorem", "exact"}));
    cmd->add_option("--threads", opt.threads, "Worker threads (0: all cores)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Newsvendor analysis with randomized order quantities", "randopt"};
    app.require_subcommand(1);
    Options opt;

    auto* solve = app.add_subcommand("solve", "Benchmark solve under estimated, compound and true demand");
    add_common(solve, opt);
    auto* search = app.add_subcommand("search", "Search order-quantity distributions that beat the naive order");
    add_common(search, opt);
    search->add_option("--trace", opt.trace_path, "Write the candidate trace CSV here");
    auto* validate = app.add_subcommand("validate", "Cross-check analytic values against Monte-Carlo");
    add_common(validate, opt);
    // Harness self-test hook: shifts every analytic value.
    validate->add_option("--inject-bias", opt.inject_bias)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kSchemaError;
    }

    try {
        if (solve->parsed()) return cmd_solve(opt, out, err);
        if (search->parsed()) return cmd_search(opt, out, err);
        return cmd_validate(opt, out, err);
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kMissingFile;
    } catch (const OutputError& e) {
        err << "error: " << e.what() << "\n";
        return kMissingFile;
    } catch (const io::SchemaError& e) {
        err << "error: " << e.what() << "\n";
        return kSchemaError;
    } catch (const NumericalIntegrityError& e) {
        err << "error: numerical integrity: " << e.what() << "\n";
        return kNumericalIntegrity;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kSchemaError;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kSchemaError;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return kSchemaError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kSchemaError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
}

}  // namespace randopt::cli

#include "randopt/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "parallel.hpp"
#include "randopt/errors.hpp"
#include "randopt/rng.hpp"

namespace randopt::mc {

void SimConfig::validate() const {
    if (n_draws < 1) throw ConfigError("sim.n_draws must be >= 1");
    if (batch_size < 1) throw ConfigError("sim.batch_size must be >= 1");
    if (antithetic && (n_draws % 2 != 0 || batch_size % 2 != 0)) {
        throw ConfigError("sim: antithetic pairing needs even n_draws and batch_size");
    }
}

void RunningStats::push(double x) {
    const auto n1 = static_cast<double>(n_);
    ++n_;
    const auto n = static_cast<double>(n_);
    const double delta = x - mean_;
    const double delta_n = delta / n;
    const double delta_n2 = delta_n * delta_n;
    const double term1 = delta * delta_n * n1;
    mean_ += delta_n;
    m4_ += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * m2_ - 4.0 * delta_n * m3_;
    m3_ += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2_;
    m2_ += term1;
}

void RunningStats::merge(const RunningStats& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
        *this = o;
        return;
    }
    const auto na = static_cast<double>(n_);
    const auto nb = static_cast<double>(o.n_);
    const double n = na + nb;
    const double delta = o.mean_ - mean_;
    const double d2 = delta * delta;
    const double d3 = d2 * delta;
    const double d4 = d2 * d2;

    const double m2 = m2_ + o.m2_ + d2 * na * nb / n;
    const double m3 = m3_ + o.m3_ + d3 * na * nb * (na - nb) / (n * n) + 3.0 * delta * (na * o.m2_ - nb * m2_) / n;
    const double m4 = m4_ + o.m4_ + d4 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                      6.0 * d2 * (na * na * o.m2_ + nb * nb * m2_) / (n * n) + 4.0 * delta * (na * o.m3_ - nb * m3_) / n;

    mean_ += delta * nb / n;
    m2_ = m2;
    m3_ = m3;
    m4_ = m4;
    n_ += o.n_;
}

double RunningStats::variance() const {
    return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

double RunningStats::fourth_moment() const {
    return n_ == 0 ? 0.0 : m4_ / static_cast<double>(n_);
}

namespace {

// Draw i of the run lives in batch i / batch_size, whose uniforms come from
// stream (seed, batch); merging in batch order makes the report independent
// of how batches are scheduled.
template <class DrawFn>
SimReport run(const SimConfig& cfg, DrawFn draw_one) {
    cfg.validate();
    const std::size_t batches = (cfg.n_draws + cfg.batch_size - 1) / cfg.batch_size;
    std::vector<RunningStats> partial(batches);

    detail::parallel_for(batches, cfg.threads, [&](std::size_t b) {
        const std::size_t first = b * cfg.batch_size;
        const std::size_t count = std::min(cfg.batch_size, cfg.n_draws - first);
        UniformStream uniforms(CounterRng(cfg.seed, b));
        uniforms.set_antithetic(cfg.antithetic);
        RunningStats stats;
        if (cfg.antithetic) {
            for (std::size_t i = 0; i < count; i += 2) {
                uniforms.begin_draw();
                const double x = draw_one(uniforms);
                uniforms.begin_draw();
                const double y = draw_one(uniforms);
                stats.push(0.5 * (x + y));
            }
        } else {
            for (std::size_t i = 0; i < count; ++i) {
                uniforms.begin_draw();
                stats.push(draw_one(uniforms));
            }
        }
        partial[b] = stats;
    });

    RunningStats total;
    for (const auto& s : partial) total.merge(s);

    SimReport r;
    r.n = cfg.n_draws;
    r.mean = total.mean();
    if (cfg.antithetic) {
        r.variance = 2.0 * total.variance();
        r.variance_std_error = std::numeric_limits<double>::quiet_NaN();
    } else {
        r.variance = total.variance();
        const double m2 = total.variance();
        r.variance_std_error = std::sqrt(std::max(0.0, total.fourth_moment() - m2 * m2) / static_cast<double>(r.n));
    }
    r.std_error = std::sqrt(r.variance / static_cast<double>(r.n));
    r.ci95_lo = r.mean - 1.96 * r.std_error;
    r.ci95_hi = r.mean + 1.96 * r.std_error;
    return r;
}

}  // namespace

SimReport simulate_profit(const MarketParams& m, const Distribution& demand, const OrderPolicy& policy,
                          const SimConfig& cfg) {
    if (const auto* det = std::get_if<DeterministicOrder>(&policy)) {
        const double q = det->q;
        if (!(q >= 0.0)) throw DomainError("deterministic order must be >= 0");
        return run(cfg, [&](UniformStream& u) {
            const double d = demand.draw(u);
            return m.p * std::min(q, d) - m.w * q;
        });
    }
    const Distribution& order = std::get<StochasticOrder>(policy).order_dist;
    return run(cfg, [&](UniformStream& u) {
        const double d = demand.draw(u);
        const double q = order.draw(u);
        return m.p * std::min(q, d) - m.w * q;
    });
}

SimReport simulate_expected_max(const Distribution& a, const Distribution& b, const SimConfig& cfg) {
    return run(cfg, [&](UniformStream& u) {
        const double x = a.draw(u);
        const double y = b.draw(u);
        return std::max(x, y);
    });
}

double z_score(double analytic, const SimReport& r) {
    const double diff = std::abs(analytic - r.mean);
    if (r.std_error > 0.0) return diff / r.std_error;
    return diff <= 1e-12 * std::max(1.0, std::abs(analytic)) ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace randopt::mc

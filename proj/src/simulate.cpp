#include "acoelab/simulate.hpp"

#include <cmath>
#include <string>

#include "acoelab/parallel.hpp"
#include "acoelab/rng.hpp"

namespace acoelab {

namespace {

void validate_config(const SimConfig& cfg) {
    if (cfg.horizon < 1)
        raise(ErrorCode::invalid_argument, "simulation horizon must be at least 1");
    if (cfg.replications < 2)
        raise(ErrorCode::invalid_argument, "simulation needs at least 2 replications");
    if (cfg.burn_in < 0 || cfg.burn_in >= cfg.horizon)
        raise(ErrorCode::invalid_argument, "burn-in must lie in [0, horizon)");
    if (!std::isfinite(cfg.initial_state))
        raise(ErrorCode::invalid_argument, "initial state must be finite");
}

void validate_policy(const SsPolicy& pol) {
    if (!(pol.s <= pol.S) || !std::isfinite(pol.s) || !std::isfinite(pol.S))
        raise(ErrorCode::invalid_argument, "(s, S) policy needs finite s <= S");
}

SimEstimate aggregate(const std::vector<double>& rep_values) {
    const double n = static_cast<double>(rep_values.size());
    double mean = 0.0;
    for (double v : rep_values)
        mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : rep_values)
        ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    return SimEstimate{mean, 1.96 * sd / std::sqrt(n), static_cast<std::int64_t>(rep_values.size())};
}

} // namespace

double step(const InventoryParams& params, double x, double a, double d) {
    if (!(a >= 0.0))
        raise(ErrorCode::invalid_argument, "order quantity must be nonnegative");
    bool known = false;
    for (double s : params.demand().support())
        if (std::abs(s - d) <= 1e-9)
            known = true;
    if (!known)
        raise(ErrorCode::invalid_argument,
              "demand realization " + std::to_string(d) + " is outside the support");
    return x + a - d;
}

SimEstimate simulate_average(const InventoryParams& params, const SsPolicy& pol,
                             const SimConfig& cfg) {
    validate_config(cfg);
    validate_policy(pol);
    const auto& dsup = params.demand().support();
    std::vector<double> rep_means(static_cast<std::size_t>(cfg.replications), 0.0);

    parallel::for_chunks(cfg.replications, [&](std::int64_t, std::int64_t begin, std::int64_t end) {
        for (std::int64_t r = begin; r < end; ++r) {
            const std::uint64_t stream = rng::derive_stream(cfg.seed, static_cast<std::uint64_t>(r));
            double x = cfg.initial_state;
            double total = 0.0;
            for (std::int64_t t = 0; t < cfg.horizon; ++t) {
                const double a = pol.order(x);
                const double cost = params.one_step_cost(x, a);
                if (t >= cfg.burn_in)
                    total += cost;
                const double u =
                    rng::unit_double(rng::draw(stream, static_cast<std::uint64_t>(t)));
                x = x + a - dsup[params.demand().sample_index(u)];
            }
            rep_means[static_cast<std::size_t>(r)] =
                total / static_cast<double>(cfg.horizon - cfg.burn_in);
        }
    });
    return aggregate(rep_means);
}

SimEstimate simulate_discounted(const InventoryParams& params, const SsPolicy& pol, double alpha,
                                const SimConfig& cfg) {
    validate_config(cfg);
    validate_policy(pol);
    if (!(alpha >= 0.0 && alpha < 1.0))
        raise(ErrorCode::invalid_argument, "discount factor must lie in [0, 1)");
    const auto& dsup = params.demand().support();
    std::vector<double> rep_totals(static_cast<std::size_t>(cfg.replications), 0.0);

    parallel::for_chunks(cfg.replications, [&](std::int64_t, std::int64_t begin, std::int64_t end) {
        for (std::int64_t r = begin; r < end; ++r) {
            const std::uint64_t stream = rng::derive_stream(cfg.seed, static_cast<std::uint64_t>(r));
            double x = cfg.initial_state;
            double total = 0.0;
            double weight = 1.0;
            for (std::int64_t t = 0; t < cfg.horizon; ++t) {
                const double a = pol.order(x);
                total += weight * params.one_step_cost(x, a);
                weight *= alpha;
                const double u =
                    rng::unit_double(rng::draw(stream, static_cast<std::uint64_t>(t)));
                x = x + a - dsup[params.demand().sample_index(u)];
            }
            rep_totals[static_cast<std::size_t>(r)] = total;
        }
    });
    return aggregate(rep_totals);
}

std::vector<TrajectoryRow> simulate_trajectory(const InventoryParams& params, const SsPolicy& pol,
                                               std::int64_t horizon, double initial_state,
                                               std::uint64_t seed) {
    if (horizon < 1)
        raise(ErrorCode::invalid_argument, "simulation horizon must be at least 1");
    validate_policy(pol);
    const auto& dsup = params.demand().support();
    const std::uint64_t stream = rng::derive_stream(seed, 0);
    std::vector<TrajectoryRow> rows;
    rows.reserve(static_cast<std::size_t>(horizon));
    double x = initial_state;
    for (std::int64_t t = 0; t < horizon; ++t) {
        const double a = pol.order(x);
        const double cost = params.one_step_cost(x, a);
        const double u = rng::unit_double(rng::draw(stream, static_cast<std::uint64_t>(t)));
        const double d = dsup[params.demand().sample_index(u)];
        rows.push_back(TrajectoryRow{t, x, a, d, cost});
        x = x + a - d;
    }
    return rows;
}

} // namespace acoelab

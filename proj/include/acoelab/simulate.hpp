#pragma once

#include <cstdint>
#include <vector>

#include "acoelab/inventory.hpp"
#include "acoelab/policy.hpp"

namespace acoelab {

/// Post-decision transition: order a arrives, demand d is served (backlogged
/// when negative inventory results).
double step(const InventoryParams& params, double x, double a, double d);

struct SimConfig {
    std::int64_t horizon = 10'000;
    std::int64_t replications = 100;
    std::int64_t burn_in = 0;
    double initial_state = 0.0;
    std::uint64_t seed = 0;
};

struct SimEstimate {
    double mean = 0.0;
    /// 95% normal-approximation half-width over replications.
    double half_width = 0.0;
    std::int64_t replications = 0;
};

/// Long-run average cost of an (s, S) policy: each replication averages the
/// one-step costs c(x_t, a_t) after burn_in; the estimate and confidence
/// half-width come from the replication means. Demand draws are counter-based
/// on (seed, replication, t), so results are bit-identical for any thread
/// count and any evaluation order.
SimEstimate simulate_average(const InventoryParams& params, const SsPolicy& pol,
                             const SimConfig& cfg);

/// Discounted total cost sum_t alpha^t c(x_t, a_t) from the initial state;
/// burn_in is ignored. The horizon should be large enough that
/// alpha^horizon times the largest one-step cost is below estimator noise.
SimEstimate simulate_discounted(const InventoryParams& params, const SsPolicy& pol, double alpha,
                                const SimConfig& cfg);

struct TrajectoryRow {
    std::int64_t t = 0;
    double x = 0.0;
    double a = 0.0;
    double d = 0.0;
    double cost = 0.0;
};

/// Single path under the replication-0 demand stream.
std::vector<TrajectoryRow> simulate_trajectory(const InventoryParams& params, const SsPolicy& pol,
                                               std::int64_t horizon, double initial_state,
                                               std::uint64_t seed);

} // namespace acoelab

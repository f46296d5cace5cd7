#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "acoelab/lattice.hpp"

namespace acoelab {

/// One-step cost c(x, a) for state x and order quantity a >= 0 (both in units).
using CostFn = std::function<double(double x, double a)>;

/// Downward random-walk transition x -> x + a - D, with the demand D given by
/// lattice-step offsets and their probabilities.
struct DemandKernel {
    std::vector<std::int64_t> offsets;
    std::vector<double> probs;
};

struct BellmanResult {
    ValueTable value;
    TabularPolicy policy;
};

/// One synchronous sweep of
///   (T_alpha v)(x) = min_{a >= 0, x + a <= x_max} [ c(x, a) + alpha E v(x + a - D) ].
/// Ties in the minimizer resolve to the smallest order. States whose demand
/// mass falls below x_min require a below-grid tail on `v`.
BellmanResult bellman_discounted(const CostFn& cost, const DemandKernel& kernel,
                                 const ValueTable& v, double alpha);

/// Reusable-buffer form of bellman_discounted for iterative solvers.
class GenericBellmanOp {
public:
    GenericBellmanOp(const CostFn& cost, const DemandKernel& kernel, Lattice lattice, double alpha);

    void apply(const ValueTable& in, ValueTable& out, std::vector<std::int64_t>& order_steps) const;
    const Lattice& lattice() const noexcept { return lattice_; }

private:
    const CostFn* cost_;
    const DemandKernel* kernel_;
    Lattice lattice_;
    double alpha_;
    mutable std::vector<double> expect_;
};

struct ValueIterationOptions {
    double tol = 1e-8;
    std::int64_t max_iter = 50'000'000;
    /// When set, every iterate (including v_0 = 0) carries a below-grid tail of
    /// this slope anchored at its bottom value.
    std::optional<double> anchor_tail_slope;
};

struct ValueIterationResult {
    ValueTable value;
    TabularPolicy policy;
    std::int64_t iterations;
    double last_change;
};

/// Value iteration from v_0 = 0 with the certified stopping rule
///   || v_{k+1} - v_k || <= tol (1 - alpha) / (2 alpha),
/// which guarantees || v_returned - v_alpha || <= tol. alpha = 0 performs a
/// single sweep (exact). The operator must expose
///   apply(const ValueTable&, ValueTable&, std::vector<int64_t>&).
template <class Op>
ValueIterationResult value_iteration_with(const Op& op, const Lattice& lattice, double alpha,
                                          const ValueIterationOptions& opts = {}) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        raise(ErrorCode::invalid_argument, "discount factor must lie in [0, 1)");
    if (!(opts.tol > 0.0) || !std::isfinite(opts.tol))
        raise(ErrorCode::invalid_argument, "tolerance must be positive");
    if (opts.max_iter < 1)
        raise(ErrorCode::invalid_argument, "max_iter must be at least 1");

    ValueTable cur = ValueTable::zeros(lattice);
    ValueTable next = cur;
    if (opts.anchor_tail_slope) {
        cur.anchor_below_grid(*opts.anchor_tail_slope);
        next.anchor_below_grid(*opts.anchor_tail_slope);
    }
    std::vector<std::int64_t> steps(static_cast<std::size_t>(lattice.size()), 0);

    const auto finish = [&](const ValueTable& v, std::int64_t iters, double change) {
        std::vector<double> orders(steps.size());
        for (std::size_t i = 0; i < steps.size(); ++i)
            orders[i] = lattice.step() * static_cast<double>(steps[i]);
        return ValueIterationResult{v, TabularPolicy(lattice, std::move(orders)), iters, change};
    };

    if (alpha == 0.0) {
        op.apply(cur, next, steps);
        if (opts.anchor_tail_slope)
            next.anchor_below_grid(*opts.anchor_tail_slope);
        return finish(next, 1, 0.0);
    }

    const double threshold = opts.tol * (1.0 - alpha) / (2.0 * alpha);
    double change = 0.0;
    for (std::int64_t it = 1; it <= opts.max_iter; ++it) {
        op.apply(cur, next, steps);
        if (opts.anchor_tail_slope)
            next.anchor_below_grid(*opts.anchor_tail_slope);
        change = 0.0;
        const auto& a = cur.values();
        const auto& b = next.values();
        for (std::size_t i = 0; i < a.size(); ++i)
            change = std::max(change, std::abs(b[i] - a[i]));
        std::swap(cur, next);
        if (change <= threshold)
            return finish(cur, it, change);
    }
    raise(ErrorCode::non_convergence,
          "value iteration hit the iteration cap (" + std::to_string(opts.max_iter) +
              "); last sup-norm change " + std::to_string(change));
}

/// Generic-kernel value iteration over a cost oracle.
ValueIterationResult value_iteration(const CostFn& cost, const DemandKernel& kernel,
                                     const Lattice& lattice, double alpha,
                                     const ValueIterationOptions& opts = {});

/// Splits v into (m, u) with m = min v and u = v - m >= 0; u keeps v's
/// below-grid slope, shifted by the same constant.
std::pair<double, ValueTable> relative_value(const ValueTable& v);

} // namespace acoelab

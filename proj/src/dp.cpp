#include "acoelab/dp.hpp"

#include <algorithm>
#include <limits>

namespace acoelab {

GenericBellmanOp::GenericBellmanOp(const CostFn& cost, const DemandKernel& kernel, Lattice lattice,
                                   double alpha)
    : cost_(&cost), kernel_(&kernel), lattice_(lattice), alpha_(alpha) {
    if (kernel.offsets.size() != kernel.probs.size() || kernel.offsets.empty())
        raise(ErrorCode::invalid_argument, "demand kernel offsets and probabilities must match");
    expect_.resize(static_cast<std::size_t>(lattice_.size()));
}

void GenericBellmanOp::apply(const ValueTable& in, ValueTable& out,
                             std::vector<std::int64_t>& order_steps) const {
    const std::int64_t n = lattice_.size();
    const auto& off = kernel_->offsets;
    const auto& p = kernel_->probs;
    const std::size_t nd = off.size();

    for (std::int64_t y = 0; y < n; ++y) {
        double e = 0.0;
        for (std::size_t k = 0; k < nd; ++k)
            e += p[k] * in.at_extended(y - off[k]);
        expect_[static_cast<std::size_t>(y)] = e;
    }

    for (std::int64_t i = 0; i < n; ++i) {
        const double x = lattice_.x(i);
        double best = std::numeric_limits<double>::infinity();
        std::int64_t best_a = 0;
        for (std::int64_t a = 0; i + a < n; ++a) {
            const double val = (*cost_)(x, lattice_.step() * static_cast<double>(a)) +
                               alpha_ * expect_[static_cast<std::size_t>(i + a)];
            if (val < best) {
                best = val;
                best_a = a;
            }
        }
        out[i] = best;
        order_steps[static_cast<std::size_t>(i)] = best_a;
    }
}

BellmanResult bellman_discounted(const CostFn& cost, const DemandKernel& kernel,
                                 const ValueTable& v, double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        raise(ErrorCode::invalid_argument, "discount factor must lie in [0, 1)");
    const Lattice& lat = v.lattice();
    GenericBellmanOp op(cost, kernel, lat, alpha);
    ValueTable out = ValueTable::zeros(lat);
    std::vector<std::int64_t> steps(static_cast<std::size_t>(lat.size()), 0);
    op.apply(v, out, steps);
    std::vector<double> orders(steps.size());
    for (std::size_t i = 0; i < steps.size(); ++i)
        orders[i] = lat.step() * static_cast<double>(steps[i]);
    return BellmanResult{std::move(out), TabularPolicy(lat, std::move(orders))};
}

ValueIterationResult value_iteration(const CostFn& cost, const DemandKernel& kernel,
                                     const Lattice& lattice, double alpha,
                                     const ValueIterationOptions& opts) {
    GenericBellmanOp op(cost, kernel, lattice, alpha);
    return value_iteration_with(op, lattice, alpha, opts);
}

std::pair<double, ValueTable> relative_value(const ValueTable& v) {
    const double m = v.min();
    std::vector<double> shifted(v.values());
    for (double& s : shifted)
        s -= m;
    std::optional<LinearTail> tail = v.below_grid();
    if (tail)
        tail->intercept -= m;
    return {m, ValueTable(v.lattice(), std::move(shifted), tail)};
}

} // namespace acoelab

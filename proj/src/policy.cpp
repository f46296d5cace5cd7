#include "acoelab/policy.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "acoelab/parallel.hpp"

namespace acoelab {

KConvexityReport check_k_convex(const ValueTable& f, double K, double tol) {
    if (!(K >= 0.0))
        raise(ErrorCode::invalid_argument, "K must be nonnegative");
    if (!(tol >= 0.0))
        raise(ErrorCode::invalid_argument, "tolerance must be nonnegative");
    const std::int64_t n = f.size();
    const auto& v = f.values();

    struct Worst {
        double excess = 0.0;
        std::int64_t i = -1, j = -1, k = -1;
    };
    std::vector<Worst> per_i(static_cast<std::size_t>(n));

    parallel::for_chunks(n, [&](std::int64_t, std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
            Worst w;
            for (std::int64_t k = i + 2; k < n; ++k) {
                const double span = static_cast<double>(k - i);
                for (std::int64_t j = i + 1; j < k; ++j) {
                    const double lam = static_cast<double>(j - i) / span;
                    const double bound = (1.0 - lam) * v[static_cast<std::size_t>(i)] +
                                         lam * v[static_cast<std::size_t>(k)] + lam * K;
                    const double excess = v[static_cast<std::size_t>(j)] - bound;
                    if (excess > w.excess) {
                        w = Worst{excess, i, j, k};
                    }
                }
            }
            per_i[static_cast<std::size_t>(i)] = w;
        }
    });

    Worst worst;
    for (const Worst& w : per_i)
        if (w.excess > worst.excess)
            worst = w;

    KConvexityReport report;
    report.worst_violation = worst.excess;
    report.is_k_convex = worst.excess <= tol;
    if (worst.i >= 0) {
        const Lattice& lat = f.lattice();
        report.witness = KConvexityReport::Witness{
            lat.x(worst.i), lat.x(worst.k),
            static_cast<double>(worst.j - worst.i) / static_cast<double>(worst.k - worst.i)};
    }
    return report;
}

SsPolicy extract_ss(const ValueTable& f, double K) {
    if (!(K >= 0.0))
        raise(ErrorCode::invalid_argument, "K must be nonnegative");
    const std::int64_t n = f.size();
    if (n < 3)
        raise(ErrorCode::invalid_argument, "(s, S) extraction needs at least 3 lattice points");
    const std::int64_t iS = f.argmin();
    if (iS == 0 || iS == n - 1)
        raise(ErrorCode::truncation_too_tight,
              "the objective attains its minimum on the lattice edge; widen the lattice");
    const double cutoff = K + f[iS];
    std::int64_t is = iS;
    for (std::int64_t i = 0; i <= iS; ++i) {
        if (f[i] <= cutoff) {
            is = i;
            break;
        }
    }
    return SsPolicy{f.lattice().x(is), f.lattice().x(iS)};
}

TabularPolicy policy_to_tabular(const SsPolicy& pol, const Lattice& lattice) {
    if (!(pol.s <= pol.S))
        raise(ErrorCode::invalid_argument, "(s, S) policy needs s <= S");
    const std::int64_t iS = lattice.index_of(pol.S);
    std::vector<double> orders(static_cast<std::size_t>(lattice.size()), 0.0);
    for (std::int64_t i = 0; i < lattice.size(); ++i)
        if (lattice.x(i) < pol.s)
            orders[static_cast<std::size_t>(i)] = lattice.step() * static_cast<double>(iS - i);
    return TabularPolicy(lattice, std::move(orders));
}

TabularPolicy modified_policy_at_s(const SsPolicy& pol, const Lattice& lattice) {
    if (!(pol.s <= pol.S))
        raise(ErrorCode::invalid_argument, "(s, S) policy needs s <= S");
    const std::int64_t iS = lattice.index_of(pol.S);
    const std::int64_t is = lattice.index_of(pol.s);
    std::vector<double> orders(static_cast<std::size_t>(lattice.size()), 0.0);
    for (std::int64_t i = 0; i <= is; ++i)
        orders[static_cast<std::size_t>(i)] = lattice.step() * static_cast<double>(iS - i);
    return TabularPolicy(lattice, std::move(orders));
}

namespace {

class PolicyRestrictedOp {
public:
    PolicyRestrictedOp(const CostFn& cost, const DemandKernel& kernel, const TabularPolicy& pol)
        : cost_(&cost), kernel_(&kernel), pol_(&pol) {}

    void apply(const ValueTable& in, ValueTable& out, std::vector<std::int64_t>&) const {
        const Lattice& lat = pol_->lattice();
        const std::int64_t n = lat.size();
        for (std::int64_t i = 0; i < n; ++i) {
            const std::int64_t y = i + pol_->order_steps(i);
            double e = 0.0;
            for (std::size_t k = 0; k < kernel_->offsets.size(); ++k)
                e += kernel_->probs[k] * in.at_extended(y - kernel_->offsets[k]);
            out[i] = (*cost_)(lat.x(i), pol_->order(i)) + alpha_ * e;
        }
    }

    double alpha_ = 0.0;

private:
    const CostFn* cost_;
    const DemandKernel* kernel_;
    const TabularPolicy* pol_;
};

} // namespace

ValueTable evaluate_policy_discounted(const CostFn& cost, const DemandKernel& kernel,
                                      const TabularPolicy& pol, double alpha, double c_bar,
                                      const ValueIterationOptions& opts) {
    PolicyRestrictedOp op(cost, kernel, pol);
    op.alpha_ = alpha;
    ValueIterationOptions o = opts;
    o.anchor_tail_slope = -c_bar;
    return value_iteration_with(op, pol.lattice(), alpha, o).value;
}

} // namespace acoelab

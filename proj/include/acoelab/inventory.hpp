#pragma once

#include <cstdint>
#include <vector>

#include "acoelab/dp.hpp"
#include "acoelab/lattice.hpp"

namespace acoelab {

/// Piecewise-linear function given by interior knots k_1 < ... < k_m and
/// slopes s_0 .. s_m, where s_j applies on [k_j, k_{j+1}) with k_0 = -inf and
/// k_{m+1} = +inf. Values are anchored so that f(0) = 0.
class PiecewiseLinearConvex {
public:
    PiecewiseLinearConvex(std::vector<double> knots, std::vector<double> slopes);

    double operator()(double x) const;

    const std::vector<double>& knots() const noexcept { return knots_; }
    const std::vector<double>& slopes() const noexcept { return slopes_; }
    double leftmost_slope() const noexcept { return slopes_.front(); }
    double rightmost_slope() const noexcept { return slopes_.back(); }

    /// Enforces the holding/backlog cost shape: convex, nonnegative, coercive
    /// in both directions (leftmost slope < 0 < rightmost slope).
    void validate_cost_shape() const;

private:
    std::vector<double> knots_;
    std::vector<double> slopes_;
    std::vector<double> knot_values_;
};

/// Finite nonnegative demand distribution.
class DemandPmf {
public:
    DemandPmf(std::vector<double> support, std::vector<double> probs);

    const std::vector<double>& support() const noexcept { return support_; }
    const std::vector<double>& probs() const noexcept { return probs_; }
    std::size_t size() const noexcept { return support_.size(); }
    double mean() const noexcept { return mean_; }
    double max_value() const noexcept { return support_.back(); }

    /// Inverse-CDF draw: index of the sampled support value for u in [0, 1).
    std::size_t sample_index(double u) const;

private:
    std::vector<double> support_;
    std::vector<double> probs_;
    std::vector<double> cdf_;
    double mean_;
};

/// Periodic-review inventory instance: fixed order cost K, unit order cost
/// c_bar, holding/backlog cost h, demand pmf, and the solver lattice.
class InventoryParams {
public:
    InventoryParams(double K, double c_bar, PiecewiseLinearConvex h, DemandPmf demand,
                    Lattice lattice);

    double K() const noexcept { return K_; }
    double c_bar() const noexcept { return c_bar_; }
    const PiecewiseLinearConvex& h() const noexcept { return h_; }
    const DemandPmf& demand() const noexcept { return demand_; }
    const Lattice& lattice() const noexcept { return lattice_; }

    /// Demand support in lattice steps.
    const std::vector<std::int64_t>& demand_offsets() const noexcept { return offsets_; }
    DemandKernel kernel() const;

    /// h~(x) = E h(x - D), analytic at any real x.
    double expected_h(double x) const;
    /// h~ tabulated on the lattice.
    const std::vector<double>& h_tilde() const noexcept { return h_tilde_; }

    /// c(x, a) = K 1{a > 0} + c_bar a + E h(x + a - D).
    double one_step_cost(double x, double a) const;

    /// Largest discount factor at which the backlog slope overwhelms the unit
    /// order cost: alpha* = 1 + lim_{x -> -inf} h(x) / (c_bar x).
    double alpha_star() const noexcept;

private:
    double K_;
    double c_bar_;
    PiecewiseLinearConvex h_;
    DemandPmf demand_;
    Lattice lattice_;
    std::vector<std::int64_t> offsets_;
    std::vector<double> h_tilde_;
};

/// Specialized Bellman sweep for the inventory model. Exploits the order-up-to
/// structure: with G(y) = c_bar y + h~(y) + alpha E v(y - D),
///   (T_alpha v)(x) = min( G(x), K + min_{y > x} G(y) ) - c_bar x,
/// evaluated with a suffix minimum, so one sweep is O(n * |support|). Ties
/// resolve to the smallest order, matching the generic kernel.
class InventoryBellmanOp {
public:
    InventoryBellmanOp(const InventoryParams& params, double alpha);

    void apply(const ValueTable& in, ValueTable& out, std::vector<std::int64_t>& order_steps) const;
    const Lattice& lattice() const noexcept { return params_->lattice(); }

private:
    const InventoryParams* params_;
    double alpha_;
    mutable std::vector<double> g_;
    mutable std::vector<double> suffix_min_;
    mutable std::vector<std::int64_t> suffix_arg_;
};

/// Discounted value iteration for an inventory instance, with the below-grid
/// tail of slope -c_bar re-anchored after every sweep.
ValueIterationResult solve_discounted(const InventoryParams& params, double alpha,
                                      const ValueIterationOptions& opts = {});

/// G_alpha(x) = c_bar x + h~(x) + alpha E v(x - D) on the lattice.
ValueTable g_alpha(const InventoryParams& params, const ValueTable& v, double alpha);

/// Expected number of renewals E N(t) = sum_{n >= 1} P(S_n <= t) of the demand
/// partial-sum process, for a nonnegative lattice-aligned t.
double renewal_mean(const InventoryParams& params, double t);

struct UpperBound {
    ValueTable mean;
    /// Standard error of the Monte Carlo part of each entry (zero left of x_L).
    std::vector<double> std_err;

    /// mean + z * std_err as a table.
    ValueTable inflated(double z) const;
};

/// Upper bound on the relative value function:
///   U(x) = K + c_bar (x_U - x)                                  for x < x_L,
///   U(x) = K + c_bar (x_U - x_L)
///          + (h(x) + E_y(x) + c_bar E D) (1 + E N(x - x_L))     otherwise,
/// where E_y(x) = E h(x - S_{N(x - x_L) + 1}) is estimated by seeded Monte
/// Carlo over `paths` demand paths. When `argmins` is given, every entry must
/// lie inside [x_L, x_U] or the bounding box is rejected.
UpperBound upper_bound_U(const InventoryParams& params, double x_L, double x_U,
                         std::uint64_t seed, std::int64_t paths,
                         const std::vector<double>* argmins = nullptr);

} // namespace acoelab

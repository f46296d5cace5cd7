#pragma once

#include <cstdint>
#include <optional>

#include "acoelab/dp.hpp"
#include "acoelab/lattice.hpp"

namespace acoelab {

/// Order-up-to rule: order S - x when x < s, nothing otherwise. Defined on all
/// of the real line, not just the lattice.
struct SsPolicy {
    double s = 0.0;
    double S = 0.0;

    double order(double x) const noexcept { return x < s ? S - x : 0.0; }
};

struct KConvexityReport {
    struct Witness {
        double x = 0.0;
        double y = 0.0;
        double lambda = 0.0;
    };

    bool is_k_convex = true;
    double worst_violation = 0.0;
    std::optional<Witness> witness;
};

/// Exhaustive K-convexity check over lattice triples x < m < y with
/// m = (1 - lambda) x + lambda y:
///   f(m) <= (1 - lambda) f(x) + lambda f(y) + lambda K.
/// worst_violation is the largest positive excess (0 when none);
/// is_k_convex holds when worst_violation <= tol.
KConvexityReport check_k_convex(const ValueTable& f, double K, double tol = 1e-9);

/// (s, S) extraction from a K-convex objective: S is the smallest minimizer of
/// f, s the smallest lattice x <= S with f(x) <= K + f(S). A minimizer on the
/// lattice edge is rejected (the truncation is too tight to trust it).
SsPolicy extract_ss(const ValueTable& f, double K);

/// Tabulates an (s, S) rule on a lattice. S must be a lattice point at or
/// below x_max.
TabularPolicy policy_to_tabular(const SsPolicy& pol, const Lattice& lattice);

/// Same as policy_to_tabular except that the boundary state x = s also orders
/// up to S (both actions at s are average-cost optimal in the limit; this
/// variant exposes the other one).
TabularPolicy modified_policy_at_s(const SsPolicy& pol, const Lattice& lattice);

/// Iterative evaluation of a fixed tabular policy:
///   v(x) = c(x, pi(x)) + alpha E v(x + pi(x) - D),
/// from v_0 = 0, with the same certified stopping rule as value iteration and
/// a below-grid tail of slope -c_bar (orders resume below the grid).
ValueTable evaluate_policy_discounted(const CostFn& cost, const DemandKernel& kernel,
                                      const TabularPolicy& pol, double alpha, double c_bar,
                                      const ValueIterationOptions& opts = {});

} // namespace acoelab

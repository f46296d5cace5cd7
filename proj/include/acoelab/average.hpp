#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "acoelab/inventory.hpp"
#include "acoelab/policy.hpp"

namespace acoelab {

/// Coefficients of the linear below-grid continuation used by the average-cost
/// equation: u~(z) = K + H(S*) - c_bar z - w for z < x_min.
struct AcoeTail {
    double w = 0.0;
    double S_star = 0.0;
};

/// H(x) = c_bar x + E h(x + a - D)|_{a=0} + E u~(x - D)
///      = c_bar x + h~(x) + E u~(x - D) on the lattice.
/// Demand mass that falls below x_min is continued with the AcoeTail formula
/// when given, else with u~'s own below-grid tail.
ValueTable h_function(const InventoryParams& params, const ValueTable& u_tilde,
                      const AcoeTail* tail = nullptr);

struct AcoeResidual {
    double value = 0.0;
    double argmax_x = 0.0;
};

/// Sup-norm defect of the average-cost optimality equation
///   w + u~(x) = min( min_{a >= 0} [K + H(x + a)], H(x) ) - c_bar x
/// over the lattice interior (a demand-reach margin is excluded at each end,
/// where truncation distorts the right-hand side).
AcoeResidual acoe_residual(const InventoryParams& params, double w, const ValueTable& u_tilde,
                           const ValueTable& H);

/// One-sided average-cost optimality inequality defect of a fixed policy:
///   sup_x [ c(x, pi(x)) + E u~(x + pi(x) - D) - w - u~(x) ]^+
/// over the same interior. Zero (up to the ACOE residual) certifies the policy
/// as average-cost optimal.
double verify_acoi(const InventoryParams& params, double w, const ValueTable& u_tilde,
                   const TabularPolicy& pol);

/// max |u(x) - u(y)| over all tables and all lattice pairs with |x - y| <=
/// delta. A bounded modulus along a discount schedule is the compactness
/// evidence behind the vanishing-discount limit.
double equicontinuity_modulus(std::span<const ValueTable> tables, double delta);

/// |K + H(S) - H(s)|: how far the two candidate actions at s are from exact
/// indifference.
double two_actions_gap(const InventoryParams& params, const ValueTable& H, const SsPolicy& pol);

struct VanishingOptions {
    double dp_tol = 1e-8;
    double kconv_tol = 1e-9;
    std::int64_t max_iter = 50'000'000;
    std::uint64_t mc_seed = 12345;
    std::int64_t mc_paths = 100'000;
};

struct AverageSolution {
    double w = 0.0;
    ValueTable u_tilde;
    ValueTable H;
    SsPolicy policy;
    double acoe_residual = 0.0;
    double residual_argmax_x = 0.0;

    std::vector<double> alphas;
    std::vector<double> w_sequence;
    std::vector<SsPolicy> ss_sequence;
    std::vector<double> m_alphas;
    std::vector<std::int64_t> iterations;
    std::vector<ValueTable> u_alphas;
    std::vector<double> argmin_xs;

    double x_lower = 0.0;
    double x_upper = 0.0;
    ValueTable upper_bound;
    std::vector<double> upper_bound_se;
    double bounds_max_excess = 0.0;
    bool bounds_ok = false;

    struct KConvexEntry {
        std::string table;
        KConvexityReport report;
    };
    std::vector<KConvexEntry> k_convexity;

    double equicontinuity_delta = 0.0;
    double equicontinuity = 0.0;
    double two_actions = 0.0;
    bool settled = true;
    std::vector<std::string> warnings;

    double dp_tol = 0.0;
    double kconv_tol = 0.0;
    std::uint64_t mc_seed = 0;
    std::int64_t mc_paths = 0;
};

/// Vanishing-discount construction along an increasing schedule alpha_1 < ...
/// < alpha_N < 1: solves each discounted problem, splits off (m_alpha,
/// u_alpha), extracts (s_alpha, S_alpha) from G_alpha, and assembles
///   w = (1 - alpha_N) m_{alpha_N},  u~ = u_{alpha_N},  (s*, S*) = last pair,
/// together with H, the ACOE residual, K-convexity reports for every table,
/// the equicontinuity modulus at one grid step, the indifference gap at s*,
/// and the Monte Carlo upper bound check u_alpha <= U over the empirical
/// bounding box (widened by two steps).
AverageSolution vanishing_discount(const InventoryParams& params, std::span<const double> schedule,
                                   const VanishingOptions& opts = {});

} // namespace acoelab

#include "acoelab/average.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace acoelab {

namespace {

std::int64_t demand_reach(const InventoryParams& params) {
    std::int64_t m = 0;
    for (std::int64_t off : params.demand_offsets())
        m = std::max(m, off);
    return m;
}

void require_interior(const InventoryParams& params, std::int64_t margin) {
    if (params.lattice().size() <= 2 * margin)
        raise(ErrorCode::invalid_argument,
              "lattice has no interior once the demand-reach margin is excluded");
}

} // namespace

ValueTable h_function(const InventoryParams& params, const ValueTable& u_tilde,
                      const AcoeTail* tail) {
    const Lattice& lat = params.lattice();
    if (!(u_tilde.lattice() == lat))
        raise(ErrorCode::invalid_argument, "u~ is tabulated on a different lattice");
    const std::int64_t n = lat.size();
    const auto& off = params.demand_offsets();
    const auto& p = params.demand().probs();
    const std::int64_t reach = demand_reach(params);
    std::vector<double> H(static_cast<std::size_t>(n), 0.0);

    // Pass 1: states whose demand stays on the grid.
    for (std::int64_t i = reach; i < n; ++i) {
        double e = 0.0;
        for (std::size_t k = 0; k < off.size(); ++k)
            e += p[k] * u_tilde[i - off[k]];
        H[static_cast<std::size_t>(i)] =
            params.c_bar() * lat.x(i) + params.h_tilde()[static_cast<std::size_t>(i)] + e;
    }

    // Pass 2: low states, continuing u~ below x_min with the ACOE tail
    //   u~(z) = K + H(S*) - c_bar z - w
    // (possible because H(S*) is already known from pass 1), or with u~'s own
    // below-grid extension when no tail parameters are given.
    double HS = 0.0;
    std::int64_t iS = -1;
    if (tail) {
        iS = lat.index_of(tail->S_star);
        if (iS < reach)
            raise(ErrorCode::truncation_underflow,
                  "S* sits within demand reach of x_min, so H(S*) cannot be formed");
        HS = H[static_cast<std::size_t>(iS)];
    }
    for (std::int64_t i = 0; i < reach && i < n; ++i) {
        double e = 0.0;
        for (std::size_t k = 0; k < off.size(); ++k) {
            const std::int64_t j = i - off[k];
            double uv = 0.0;
            if (j >= 0)
                uv = u_tilde[j];
            else if (tail)
                uv = params.K() + HS - params.c_bar() * lat.x(j) - tail->w;
            else
                uv = u_tilde.at_extended(j);
            e += p[k] * uv;
        }
        H[static_cast<std::size_t>(i)] =
            params.c_bar() * lat.x(i) + params.h_tilde()[static_cast<std::size_t>(i)] + e;
    }
    return ValueTable(lat, std::move(H));
}

AcoeResidual acoe_residual(const InventoryParams& params, double w, const ValueTable& u_tilde,
                           const ValueTable& H) {
    const Lattice& lat = params.lattice();
    if (!(u_tilde.lattice() == lat) || !(H.lattice() == lat))
        raise(ErrorCode::invalid_argument, "tables are tabulated on a different lattice");
    const std::int64_t n = lat.size();
    const std::int64_t margin = demand_reach(params);
    require_interior(params, margin);

    // min_{y >= x} H(y) via a suffix minimum; the order branch is K + that.
    std::vector<double> suffix(static_cast<std::size_t>(n));
    suffix[static_cast<std::size_t>(n - 1)] = H[n - 1];
    for (std::int64_t i = n - 2; i >= 0; --i)
        suffix[static_cast<std::size_t>(i)] = std::min(H[i], suffix[static_cast<std::size_t>(i + 1)]);

    AcoeResidual res;
    for (std::int64_t i = margin; i < n - margin; ++i) {
        const double rhs =
            std::min(params.K() + suffix[static_cast<std::size_t>(i)], H[i]) - params.c_bar() * lat.x(i);
        const double defect = std::abs(w + u_tilde[i] - rhs);
        if (defect > res.value) {
            res.value = defect;
            res.argmax_x = lat.x(i);
        }
    }
    return res;
}

double verify_acoi(const InventoryParams& params, double w, const ValueTable& u_tilde,
                   const TabularPolicy& pol) {
    const Lattice& lat = params.lattice();
    if (!(u_tilde.lattice() == lat) || !(pol.lattice() == lat))
        raise(ErrorCode::invalid_argument, "policy or u~ lives on a different lattice");
    const std::int64_t n = lat.size();
    const std::int64_t margin = demand_reach(params);
    require_interior(params, margin);
    const auto& off = params.demand_offsets();
    const auto& p = params.demand().probs();

    double worst = 0.0;
    for (std::int64_t i = margin; i < n - margin; ++i) {
        const std::int64_t y = i + pol.order_steps(i);
        double e = 0.0;
        for (std::size_t k = 0; k < off.size(); ++k)
            e += p[k] * u_tilde.at_extended(y - off[k]);
        const double lhs = params.one_step_cost(lat.x(i), pol.order(i)) + e - w - u_tilde[i];
        worst = std::max(worst, lhs);
    }
    return worst;
}

double equicontinuity_modulus(std::span<const ValueTable> tables, double delta) {
    if (tables.empty())
        raise(ErrorCode::invalid_argument, "equicontinuity modulus needs at least one table");
    if (!(delta >= 0.0))
        raise(ErrorCode::invalid_argument, "delta must be nonnegative");
    double modulus = 0.0;
    for (const ValueTable& t : tables) {
        const std::int64_t reach =
            static_cast<std::int64_t>(std::floor(delta / t.lattice().step() + 1e-9));
        for (std::int64_t k = 1; k <= reach; ++k)
            for (std::int64_t i = 0; i + k < t.size(); ++i)
                modulus = std::max(modulus, std::abs(t[i + k] - t[i]));
    }
    return modulus;
}

double two_actions_gap(const InventoryParams& params, const ValueTable& H, const SsPolicy& pol) {
    const Lattice& lat = params.lattice();
    const std::int64_t is = lat.index_of(pol.s);
    const std::int64_t iS = lat.index_of(pol.S);
    return std::abs(params.K() + H[iS] - H[is]);
}

AverageSolution vanishing_discount(const InventoryParams& params, std::span<const double> schedule,
                                   const VanishingOptions& opts) {
    if (schedule.empty())
        raise(ErrorCode::invalid_argument, "discount schedule is empty");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] >= 0.0 && schedule[i] < 1.0))
            raise(ErrorCode::invalid_argument, "schedule entries must lie in [0, 1)");
        if (i > 0 && !(schedule[i] > schedule[i - 1]))
            raise(ErrorCode::invalid_argument, "schedule must be strictly increasing");
    }
    const double astar = params.alpha_star();
    if (!(schedule.front() > astar))
        raise(ErrorCode::precondition,
              "schedule must start above alpha* = " + std::to_string(astar) +
                  "; below it the discounted problems degenerate");

    AverageSolution sol;
    sol.dp_tol = opts.dp_tol;
    sol.kconv_tol = opts.kconv_tol;
    sol.mc_seed = opts.mc_seed;
    sol.mc_paths = opts.mc_paths;

    ValueIterationOptions vi_opts;
    vi_opts.tol = opts.dp_tol;
    vi_opts.max_iter = opts.max_iter;

    std::vector<ValueTable> g_tables;
    for (double alpha : schedule) {
        ValueIterationResult r = solve_discounted(params, alpha, vi_opts);
        auto [m, u] = relative_value(r.value);
        ValueTable g = g_alpha(params, r.value, alpha);
        SsPolicy ss = extract_ss(g, params.K());

        sol.alphas.push_back(alpha);
        sol.m_alphas.push_back(m);
        sol.w_sequence.push_back((1.0 - alpha) * m);
        sol.iterations.push_back(r.iterations);
        sol.ss_sequence.push_back(ss);
        sol.argmin_xs.push_back(params.lattice().x(r.value.argmin()));
        sol.u_alphas.push_back(std::move(u));
        g_tables.push_back(std::move(g));
    }

    const std::size_t N = sol.alphas.size();
    sol.w = sol.w_sequence.back();
    sol.policy = sol.ss_sequence.back();
    sol.u_tilde = sol.u_alphas.back();

    if (N == 1) {
        sol.warnings.push_back(
            "single-alpha schedule: the vanishing-discount limit is extrapolated from one point");
    } else {
        const SsPolicy& a = sol.ss_sequence[N - 2];
        const SsPolicy& b = sol.ss_sequence[N - 1];
        const double step = params.lattice().step();
        sol.settled = std::abs(a.s - b.s) <= step + 1e-12 && std::abs(a.S - b.S) <= step + 1e-12;
        if (!sol.settled)
            sol.warnings.push_back("(s, S) has not settled: the last two schedule entries "
                                   "disagree by more than one grid step");
    }

    const AcoeTail tail{sol.w, sol.policy.S};
    sol.H = h_function(params, sol.u_tilde, &tail);
    const AcoeResidual res = acoe_residual(params, sol.w, sol.u_tilde, sol.H);
    sol.acoe_residual = res.value;
    sol.residual_argmax_x = res.argmax_x;

    sol.two_actions = two_actions_gap(params, sol.H, sol.policy);
    sol.equicontinuity_delta = params.lattice().step();
    sol.equicontinuity = equicontinuity_modulus(sol.u_alphas, sol.equicontinuity_delta);

    for (std::size_t i = 0; i < N; ++i) {
        sol.k_convexity.push_back({"g_alpha_" + std::to_string(i + 1),
                                   check_k_convex(g_tables[i], params.K(), opts.kconv_tol)});
        sol.k_convexity.push_back({"u_alpha_" + std::to_string(i + 1),
                                   check_k_convex(sol.u_alphas[i], params.K(), opts.kconv_tol)});
    }
    sol.k_convexity.push_back({"u_tilde", check_k_convex(sol.u_tilde, params.K(), opts.kconv_tol)});
    sol.k_convexity.push_back({"H", check_k_convex(sol.H, params.K(), opts.kconv_tol)});

    const double step = params.lattice().step();
    const auto [lo_it, hi_it] = std::minmax_element(sol.argmin_xs.begin(), sol.argmin_xs.end());
    sol.x_lower = *lo_it - 2.0 * step;
    sol.x_upper = *hi_it + 2.0 * step;
    UpperBound ub =
        upper_bound_U(params, sol.x_lower, sol.x_upper, opts.mc_seed, opts.mc_paths, &sol.argmin_xs);
    const ValueTable inflated = ub.inflated(3.0);
    double excess = -std::numeric_limits<double>::infinity();
    for (const ValueTable& u : sol.u_alphas)
        for (std::int64_t i = 0; i < u.size(); ++i)
            excess = std::max(excess, u[i] - inflated[i]);
    sol.bounds_max_excess = excess;
    sol.bounds_ok = excess <= 0.0;
    sol.upper_bound = std::move(ub.mean);
    sol.upper_bound_se = std::move(ub.std_err);

    return sol;
}

} // namespace acoelab

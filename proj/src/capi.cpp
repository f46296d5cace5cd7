#include "acoelab.h"

#include <algorithm>
#include <cstring>
#include <memory>
#include <new>
#include <span>
#include <string>

#include "acoelab/average.hpp"
#include "acoelab/instance_io.hpp"
#include "acoelab/inventory.hpp"
#include "acoelab/policy.hpp"
#include "acoelab/simulate.hpp"

using namespace acoelab;

struct acoe_instance {
    InventoryParams rep;
};

struct acoe_discounted {
    ValueIterationResult rep;
    ValueTable u;
    ValueTable g;
    double m = 0.0;
    SsPolicy ss;
};

struct acoe_average {
    AverageSolution rep;
};

namespace {

thread_local std::string g_last_error;

int code_of(const Error& e) {
    return static_cast<int>(e.code());
}

template <class Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        g_last_error = e.what();
        return code_of(e);
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return ACOE_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return ACOE_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return ACOE_ERR_INTERNAL;
    }
}

int fail(int code, const char* msg) {
    g_last_error = msg;
    return code;
}

int copy_out(const std::vector<double>& src, double* buf, int64_t cap) {
    if (!buf || cap < static_cast<int64_t>(src.size()))
        return fail(ACOE_ERR_INVALID_ARGUMENT, "output buffer is null or too small");
    std::memcpy(buf, src.data(), src.size() * sizeof(double));
    return ACOE_OK;
}

ValueTable table_from(const acoe_instance* inst, const double* values, int64_t n,
                      bool anchor_cbar_tail) {
    if (!values)
        raise(ErrorCode::invalid_argument, "values buffer is null");
    const Lattice& lat = inst->rep.lattice();
    if (n != lat.size())
        raise(ErrorCode::invalid_argument, "table length does not match the instance lattice");
    ValueTable t(lat, std::vector<double>(values, values + n));
    if (anchor_cbar_tail)
        t.anchor_below_grid(-inst->rep.c_bar());
    return t;
}

} // namespace

extern "C" {

const char* acoe_version(void) {
    return ACOE_API_VERSION;
}

const char* acoe_last_error(void) {
    return g_last_error.c_str();
}

int acoe_instance_load_file(const char* path, acoe_instance** out) {
    if (!path || !out)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "path and out must be non-null");
    return guarded([&] {
        *out = new acoe_instance{instance_from_file(path)};
        return ACOE_OK;
    });
}

int acoe_instance_load_string(const char* json_text, acoe_instance** out) {
    if (!json_text || !out)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "json_text and out must be non-null");
    return guarded([&] {
        *out = new acoe_instance{instance_from_json(json_text)};
        return ACOE_OK;
    });
}

int acoe_instance_with_param(const acoe_instance* base, const char* name, double value,
                             acoe_instance** out) {
    if (!base || !name || !out)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "base, name and out must be non-null");
    return guarded([&] {
        const InventoryParams& p = base->rep;
        double K = p.K();
        double c_bar = p.c_bar();
        if (std::strcmp(name, "K") == 0)
            K = value;
        else if (std::strcmp(name, "c_bar") == 0)
            c_bar = value;
        else
            raise(ErrorCode::invalid_argument,
                  std::string("unknown parameter '") + name + "'; expected K or c_bar");
        *out = new acoe_instance{InventoryParams(K, c_bar, p.h(), p.demand(), p.lattice())};
        return ACOE_OK;
    });
}

void acoe_instance_free(acoe_instance* inst) {
    delete inst;
}

int acoe_instance_lattice(const acoe_instance* inst, double* x_min, double* x_max, double* step,
                          int64_t* n_points) {
    if (!inst)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "instance is null");
    const Lattice& lat = inst->rep.lattice();
    if (x_min)
        *x_min = lat.x_min();
    if (x_max)
        *x_max = lat.x_max();
    if (step)
        *step = lat.step();
    if (n_points)
        *n_points = lat.size();
    return ACOE_OK;
}

int acoe_instance_params(const acoe_instance* inst, double* K, double* c_bar,
                         double* mean_demand) {
    if (!inst)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "instance is null");
    if (K)
        *K = inst->rep.K();
    if (c_bar)
        *c_bar = inst->rep.c_bar();
    if (mean_demand)
        *mean_demand = inst->rep.demand().mean();
    return ACOE_OK;
}

int acoe_instance_alpha_star(const acoe_instance* inst, double* out) {
    if (!inst || !out)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "instance and out must be non-null");
    *out = inst->rep.alpha_star();
    return ACOE_OK;
}

int acoe_instance_cost(const acoe_instance* inst, double x, double a, double* out) {
    if (!inst || !out)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "instance and out must be non-null");
    return guarded([&] {
        *out = inst->rep.one_step_cost(x, a);
        return ACOE_OK;
    });
}

int acoe_solve_discounted(const acoe_instance* inst, double alpha, double tol, int64_t max_iter,
                          acoe_discounted** out) {
    if (!inst || !out)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "instance and out must be non-null");
    return guarded([&] {
        ValueIterationOptions opts;
        opts.tol = tol;
        if (max_iter > 0)
            opts.max_iter = max_iter;
        auto sol = std::make_unique<acoe_discounted>(
            acoe_discounted{solve_discounted(inst->rep, alpha, opts), {}, {}, 0.0, {}});
        auto [m, u] = relative_value(sol->rep.value);
        sol->m = m;
        sol->u = std::move(u);
        sol->g = g_alpha(inst->rep, sol->rep.value, alpha);
        sol->ss = extract_ss(sol->g, inst->rep.K());
        *out = sol.release();
        return ACOE_OK;
    });
}

void acoe_discounted_free(acoe_discounted* sol) {
    delete sol;
}

int acoe_discounted_info(const acoe_discounted* sol, double* s, double* S, int64_t* iterations,
                         double* m_alpha) {
    if (!sol)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "solution is null");
    if (s)
        *s = sol->ss.s;
    if (S)
        *S = sol->ss.S;
    if (iterations)
        *iterations = sol->rep.iterations;
    if (m_alpha)
        *m_alpha = sol->m;
    return ACOE_OK;
}

int acoe_discounted_table(const acoe_discounted* sol, int which, double* buf, int64_t cap) {
    if (!sol)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "solution is null");
    switch (which) {
    case ACOE_TABLE_V:
        return copy_out(sol->rep.value.values(), buf, cap);
    case ACOE_TABLE_U:
        return copy_out(sol->u.values(), buf, cap);
    case ACOE_TABLE_G:
        return copy_out(sol->g.values(), buf, cap);
    default:
        return fail(ACOE_ERR_INVALID_ARGUMENT, "unknown table selector for a discounted solve");
    }
}

int acoe_discounted_policy(const acoe_discounted* sol, double* buf, int64_t cap) {
    if (!sol)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "solution is null");
    return copy_out(sol->rep.policy.orders(), buf, cap);
}

int acoe_solve_average(const acoe_instance* inst, const double* alphas, int64_t n_alphas,
                       double dp_tol, uint64_t mc_seed, int64_t mc_paths, acoe_average** out) {
    if (!inst || !alphas || !out)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "instance, alphas and out must be non-null");
    if (n_alphas < 1)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "schedule must have at least one entry");
    return guarded([&] {
        VanishingOptions opts;
        opts.dp_tol = dp_tol;
        opts.mc_seed = mc_seed;
        if (mc_paths > 0)
            opts.mc_paths = mc_paths;
        std::span<const double> schedule(alphas, static_cast<std::size_t>(n_alphas));
        *out = new acoe_average{vanishing_discount(inst->rep, schedule, opts)};
        return ACOE_OK;
    });
}

void acoe_average_free(acoe_average* sol) {
    delete sol;
}

int acoe_average_info(const acoe_average* sol, double* w, double* s_star, double* S_star,
                      double* residual, double* residual_argmax_x, int* settled) {
    if (!sol)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "solution is null");
    if (w)
        *w = sol->rep.w;
    if (s_star)
        *s_star = sol->rep.policy.s;
    if (S_star)
        *S_star = sol->rep.policy.S;
    if (residual)
        *residual = sol->rep.acoe_residual;
    if (residual_argmax_x)
        *residual_argmax_x = sol->rep.residual_argmax_x;
    if (settled)
        *settled = sol->rep.settled ? 1 : 0;
    return ACOE_OK;
}

int acoe_average_sequences(const acoe_average* sol, double* w_seq, double* s_seq, double* S_seq,
                           int64_t* iterations, double* argmin_xs, int64_t cap) {
    if (!sol)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "solution is null");
    const auto& r = sol->rep;
    const int64_t n = static_cast<int64_t>(r.alphas.size());
    if (cap < n)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "output buffers are too small for the schedule");
    for (int64_t i = 0; i < n; ++i) {
        if (w_seq)
            w_seq[i] = r.w_sequence[static_cast<std::size_t>(i)];
        if (s_seq)
            s_seq[i] = r.ss_sequence[static_cast<std::size_t>(i)].s;
        if (S_seq)
            S_seq[i] = r.ss_sequence[static_cast<std::size_t>(i)].S;
        if (iterations)
            iterations[i] = r.iterations[static_cast<std::size_t>(i)];
        if (argmin_xs)
            argmin_xs[i] = r.argmin_xs[static_cast<std::size_t>(i)];
    }
    return ACOE_OK;
}

int acoe_average_table(const acoe_average* sol, int which, double* buf, int64_t cap) {
    if (!sol)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "solution is null");
    switch (which) {
    case ACOE_TABLE_U_TILDE:
        return copy_out(sol->rep.u_tilde.values(), buf, cap);
    case ACOE_TABLE_H:
        return copy_out(sol->rep.H.values(), buf, cap);
    case ACOE_TABLE_UPPER:
        return copy_out(sol->rep.upper_bound.values(), buf, cap);
    case ACOE_TABLE_UPPER_SE:
        return copy_out(sol->rep.upper_bound_se, buf, cap);
    default:
        return fail(ACOE_ERR_INVALID_ARGUMENT, "unknown table selector for an average solve");
    }
}

int acoe_average_u_alpha(const acoe_average* sol, int64_t n_index, double* buf, int64_t cap) {
    if (!sol)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "solution is null");
    if (n_index < 0 || n_index >= static_cast<int64_t>(sol->rep.u_alphas.size()))
        return fail(ACOE_ERR_INVALID_ARGUMENT, "schedule index out of range");
    return copy_out(sol->rep.u_alphas[static_cast<std::size_t>(n_index)].values(), buf, cap);
}

int acoe_average_bounds(const acoe_average* sol, double* x_lower, double* x_upper,
                        double* max_excess, int* bounds_ok) {
    if (!sol)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "solution is null");
    if (x_lower)
        *x_lower = sol->rep.x_lower;
    if (x_upper)
        *x_upper = sol->rep.x_upper;
    if (max_excess)
        *max_excess = sol->rep.bounds_max_excess;
    if (bounds_ok)
        *bounds_ok = sol->rep.bounds_ok ? 1 : 0;
    return ACOE_OK;
}

int acoe_average_diagnostics(const acoe_average* sol, double* worst_k_convexity,
                             double* equicontinuity, double* two_actions_gap) {
    if (!sol)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "solution is null");
    if (worst_k_convexity) {
        double worst = 0.0;
        for (const auto& entry : sol->rep.k_convexity)
            worst = std::max(worst, entry.report.worst_violation);
        *worst_k_convexity = worst;
    }
    if (equicontinuity)
        *equicontinuity = sol->rep.equicontinuity;
    if (two_actions_gap)
        *two_actions_gap = sol->rep.two_actions;
    return ACOE_OK;
}

int acoe_check_k_convex(const double* values, int64_t n, double K, double tol, int* is_k_convex,
                        double* worst, int64_t* wx, int64_t* wy, double* wlambda) {
    if (!values || n < 1)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "values must be a non-empty array");
    return guarded([&] {
        // An index lattice is enough here: K-convexity over a uniform grid
        // depends only on index ratios.
        Lattice lat(0.0, static_cast<double>(n > 1 ? n - 1 : 1), 1.0);
        std::vector<double> vals(values, values + n);
        if (n == 1)
            vals.push_back(vals[0]);
        KConvexityReport rep = check_k_convex(ValueTable(lat, vals), K, tol);
        if (is_k_convex)
            *is_k_convex = rep.is_k_convex ? 1 : 0;
        if (worst)
            *worst = rep.worst_violation;
        if (wx)
            *wx = rep.witness ? static_cast<int64_t>(rep.witness->x) : -1;
        if (wy)
            *wy = rep.witness ? static_cast<int64_t>(rep.witness->y) : -1;
        if (wlambda)
            *wlambda = rep.witness ? rep.witness->lambda : 0.0;
        return ACOE_OK;
    });
}

int acoe_extract_ss(const acoe_instance* inst, const double* values, int64_t n, double* s,
                    double* S) {
    if (!inst || !s || !S)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "instance, s and S must be non-null");
    return guarded([&] {
        ValueTable f = table_from(inst, values, n, false);
        SsPolicy pol = extract_ss(f, inst->rep.K());
        *s = pol.s;
        *S = pol.S;
        return ACOE_OK;
    });
}

int acoe_acoe_residual(const acoe_instance* inst, double w, const double* u_tilde,
                       const double* H, int64_t n, double* residual, double* argmax_x) {
    if (!inst || !residual)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "instance and residual must be non-null");
    return guarded([&] {
        ValueTable u = table_from(inst, u_tilde, n, true);
        ValueTable h = table_from(inst, H, n, false);
        AcoeResidual res = acoe_residual(inst->rep, w, u, h);
        *residual = res.value;
        if (argmax_x)
            *argmax_x = res.argmax_x;
        return ACOE_OK;
    });
}

int acoe_verify_acoi(const acoe_instance* inst, double w, const double* u_tilde, int64_t n,
                     double s, double S, int order_at_s, double* violation) {
    if (!inst || !violation)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "instance and violation must be non-null");
    return guarded([&] {
        ValueTable u = table_from(inst, u_tilde, n, true);
        SsPolicy pol{s, S};
        TabularPolicy tab = order_at_s ? modified_policy_at_s(pol, inst->rep.lattice())
                                       : policy_to_tabular(pol, inst->rep.lattice());
        *violation = verify_acoi(inst->rep, w, u, tab);
        return ACOE_OK;
    });
}

int acoe_two_actions_gap(const acoe_instance* inst, const double* H, int64_t n, double s, double S,
                         double* gap) {
    if (!inst || !gap)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "instance and gap must be non-null");
    return guarded([&] {
        ValueTable h = table_from(inst, H, n, false);
        *gap = two_actions_gap(inst->rep, h, SsPolicy{s, S});
        return ACOE_OK;
    });
}

int acoe_renewal_mean(const acoe_instance* inst, double t, double* out) {
    if (!inst || !out)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "instance and out must be non-null");
    return guarded([&] {
        *out = renewal_mean(inst->rep, t);
        return ACOE_OK;
    });
}

int acoe_upper_bound(const acoe_instance* inst, double x_L, double x_U, uint64_t seed,
                     int64_t paths, double* u_buf, double* se_buf, int64_t cap) {
    if (!inst || !u_buf)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "instance and u_buf must be non-null");
    return guarded([&] {
        UpperBound ub = upper_bound_U(inst->rep, x_L, x_U, seed, paths);
        int rc = copy_out(ub.mean.values(), u_buf, cap);
        if (rc != ACOE_OK)
            return rc;
        if (se_buf)
            rc = copy_out(ub.std_err, se_buf, cap);
        return rc;
    });
}

int acoe_simulate_average(const acoe_instance* inst, double s, double S, int64_t horizon,
                          int64_t replications, int64_t burn_in, double initial, uint64_t seed,
                          double* mean, double* half_width) {
    if (!inst || !mean || !half_width)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "instance, mean and half_width must be non-null");
    return guarded([&] {
        SimConfig cfg;
        cfg.horizon = horizon;
        cfg.replications = replications;
        cfg.burn_in = burn_in;
        cfg.initial_state = initial;
        cfg.seed = seed;
        SimEstimate est = simulate_average(inst->rep, SsPolicy{s, S}, cfg);
        *mean = est.mean;
        *half_width = est.half_width;
        return ACOE_OK;
    });
}

int acoe_simulate_discounted(const acoe_instance* inst, double s, double S, double alpha,
                             int64_t horizon, int64_t replications, double initial, uint64_t seed,
                             double* mean, double* half_width) {
    if (!inst || !mean || !half_width)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "instance, mean and half_width must be non-null");
    return guarded([&] {
        SimConfig cfg;
        cfg.horizon = horizon;
        cfg.replications = replications;
        cfg.burn_in = 0;
        cfg.initial_state = initial;
        cfg.seed = seed;
        SimEstimate est = simulate_discounted(inst->rep, SsPolicy{s, S}, alpha, cfg);
        *mean = est.mean;
        *half_width = est.half_width;
        return ACOE_OK;
    });
}

int acoe_simulate_trajectory(const acoe_instance* inst, double s, double S, int64_t horizon,
                             double initial, uint64_t seed, double* buf, int64_t cap) {
    if (!inst || !buf)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "instance and buf must be non-null");
    if (cap < 5 * horizon)
        return fail(ACOE_ERR_INVALID_ARGUMENT, "trajectory buffer needs 5 * horizon doubles");
    return guarded([&] {
        auto rows = simulate_trajectory(inst->rep, SsPolicy{s, S}, horizon, initial, seed);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            buf[5 * i + 0] = static_cast<double>(rows[i].t);
            buf[5 * i + 1] = rows[i].x;
            buf[5 * i + 2] = rows[i].a;
            buf[5 * i + 3] = rows[i].d;
            buf[5 * i + 4] = rows[i].cost;
        }
        return ACOE_OK;
    });
}

} // extern "C"

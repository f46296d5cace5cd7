/* C interface to the acoelab inventory-control solvers.
 *
 * Conventions:
 *  - Every function returns a status code; ACOE_OK (0) means success.
 *  - On failure, acoe_last_error() returns a thread-local description, valid
 *    until the next failing call on the same thread.
 *  - Objects behind opaque handles are created by acoe_*_new/load/solve
 *    functions and must be released with the matching acoe_*_free.
 *  - Array outputs fill a caller-provided buffer; `cap` is its length in
 *    doubles, and the call fails with ACOE_ERR_INVALID_ARGUMENT when the
 *    buffer is too small. Lattice length comes from acoe_instance_lattice.
 */
#ifndef ACOELAB_H
#define ACOELAB_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define ACOE_API_VERSION "0.1.0"

enum {
    ACOE_OK = 0,
    ACOE_ERR_INVALID_ARGUMENT = 1,
    ACOE_ERR_INVALID_INSTANCE = 2,
    ACOE_ERR_PARSE = 3,
    ACOE_ERR_IO = 4,
    ACOE_ERR_TRUNCATION_UNDERFLOW = 5,
    ACOE_ERR_TRUNCATION_TOO_TIGHT = 6,
    ACOE_ERR_NON_CONVERGENCE = 7,
    ACOE_ERR_BOUNDING_BOX = 8,
    ACOE_ERR_PRECONDITION = 9,
    ACOE_ERR_INTERNAL = 10
};

/* Table selectors. */
enum {
    ACOE_TABLE_V = 0,       /* discounted value v_alpha            */
    ACOE_TABLE_U = 1,       /* relative value u_alpha = v - min v  */
    ACOE_TABLE_G = 2,       /* order-up-to objective G_alpha       */
    ACOE_TABLE_U_TILDE = 3, /* average-cost relative value         */
    ACOE_TABLE_H = 4,       /* average-cost order objective        */
    ACOE_TABLE_UPPER = 5,   /* Monte Carlo upper bound U           */
    ACOE_TABLE_UPPER_SE = 6 /* standard error of U's MC component  */
};

typedef struct acoe_instance acoe_instance;
typedef struct acoe_discounted acoe_discounted;
typedef struct acoe_average acoe_average;

const char* acoe_version(void);
const char* acoe_last_error(void);

/* ---- Instances ---------------------------------------------------------- */

int acoe_instance_load_file(const char* path, acoe_instance** out);
int acoe_instance_load_string(const char* json_text, acoe_instance** out);
/* Copy of `base` with parameter `name` ("K" or "c_bar") replaced. */
int acoe_instance_with_param(const acoe_instance* base, const char* name, double value,
                             acoe_instance** out);
void acoe_instance_free(acoe_instance* inst);

int acoe_instance_lattice(const acoe_instance* inst, double* x_min, double* x_max, double* step,
                          int64_t* n_points);
int acoe_instance_params(const acoe_instance* inst, double* K, double* c_bar,
                         double* mean_demand);
int acoe_instance_alpha_star(const acoe_instance* inst, double* out);
/* c(x, a) = K 1{a > 0} + c_bar a + E h(x + a - D). */
int acoe_instance_cost(const acoe_instance* inst, double x, double a, double* out);

/* ---- Discounted solve --------------------------------------------------- */

/* Value iteration from v = 0 with stopping rule
 * sup|v_{k+1} - v_k| <= tol (1 - alpha) / (2 alpha); alpha = 0 is one exact
 * sweep. max_iter <= 0 selects the default cap. */
int acoe_solve_discounted(const acoe_instance* inst, double alpha, double tol, int64_t max_iter,
                          acoe_discounted** out);
void acoe_discounted_free(acoe_discounted* sol);

int acoe_discounted_info(const acoe_discounted* sol, double* s, double* S, int64_t* iterations,
                         double* m_alpha);
int acoe_discounted_table(const acoe_discounted* sol, int which, double* buf, int64_t cap);
/* Greedy order quantities per lattice state. */
int acoe_discounted_policy(const acoe_discounted* sol, double* buf, int64_t cap);

/* ---- Average-cost solve (vanishing discount) ---------------------------- */

/* Runs the vanishing-discount construction along the increasing schedule
 * alphas[0..n_alphas). mc_seed/mc_paths drive the upper-bound Monte Carlo;
 * mc_paths <= 0 selects the default (100000). */
int acoe_solve_average(const acoe_instance* inst, const double* alphas, int64_t n_alphas,
                       double dp_tol, uint64_t mc_seed, int64_t mc_paths, acoe_average** out);
void acoe_average_free(acoe_average* sol);

int acoe_average_info(const acoe_average* sol, double* w, double* s_star, double* S_star,
                      double* residual, double* residual_argmax_x, int* settled);
/* Per-schedule-entry diagnostics; each buffer (may be NULL) holds n_alphas. */
int acoe_average_sequences(const acoe_average* sol, double* w_seq, double* s_seq, double* S_seq,
                           int64_t* iterations, double* argmin_xs, int64_t cap);
int acoe_average_table(const acoe_average* sol, int which, double* buf, int64_t cap);
/* Relative value table for schedule entry n_index (0-based). */
int acoe_average_u_alpha(const acoe_average* sol, int64_t n_index, double* buf, int64_t cap);
int acoe_average_bounds(const acoe_average* sol, double* x_lower, double* x_upper,
                        double* max_excess, int* bounds_ok);
/* Worst K-convexity violation across all checked tables, and the
 * equicontinuity modulus of {u_alpha} at one grid step. */
int acoe_average_diagnostics(const acoe_average* sol, double* worst_k_convexity,
                             double* equicontinuity, double* two_actions_gap);

/* ---- Structure checks on raw tables ------------------------------------- */

/* Exhaustive lattice K-convexity check of values[0..n). On return,
 * *is_k_convex in {0,1}, *worst >= 0; witness outputs (may be NULL) receive
 * the worst triple as x-index, y-index and lambda. */
int acoe_check_k_convex(const double* values, int64_t n, double K, double tol, int* is_k_convex,
                        double* worst, int64_t* wx, int64_t* wy, double* wlambda);
/* Smallest minimizer S of values over the instance lattice and smallest
 * s <= S with f(s) <= K + f(S); errors when the minimizer sits on the edge. */
int acoe_extract_ss(const acoe_instance* inst, const double* values, int64_t n, double* s,
                    double* S);
int acoe_acoe_residual(const acoe_instance* inst, double w, const double* u_tilde,
                       const double* H, int64_t n, double* residual, double* argmax_x);
/* ACOI defect of the (s, S) policy (order_at_s != 0 orders at x = s too). */
int acoe_verify_acoi(const acoe_instance* inst, double w, const double* u_tilde, int64_t n,
                     double s, double S, int order_at_s, double* violation);
int acoe_two_actions_gap(const acoe_instance* inst, const double* H, int64_t n, double s, double S,
                         double* gap);

/* ---- Renewal quantities and the upper bound ----------------------------- */

int acoe_renewal_mean(const acoe_instance* inst, double t, double* out);
/* U over the lattice for the box [x_L, x_U]; buffers of length cap >= n
 * receive the bound and (optionally, may be NULL) the MC standard error. */
int acoe_upper_bound(const acoe_instance* inst, double x_L, double x_U, uint64_t seed,
                     int64_t paths, double* u_buf, double* se_buf, int64_t cap);

/* ---- Simulation --------------------------------------------------------- */

int acoe_simulate_average(const acoe_instance* inst, double s, double S, int64_t horizon,
                          int64_t replications, int64_t burn_in, double initial, uint64_t seed,
                          double* mean, double* half_width);
int acoe_simulate_discounted(const acoe_instance* inst, double s, double S, double alpha,
                             int64_t horizon, int64_t replications, double initial, uint64_t seed,
                             double* mean, double* half_width);
/* Replication-0 path; buf receives horizon rows of (t, x, a, d, cost), so cap
 * must be at least 5 * horizon. */
int acoe_simulate_trajectory(const acoe_instance* inst, double s, double S, int64_t horizon,
                             double initial, uint64_t seed, double* buf, int64_t cap);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ACOELAB_H */

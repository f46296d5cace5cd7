#include "acoelab/inventory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "acoelab/rng.hpp"

namespace acoelab {

PiecewiseLinearConvex::PiecewiseLinearConvex(std::vector<double> knots, std::vector<double> slopes)
    : knots_(std::move(knots)), slopes_(std::move(slopes)) {
    if (knots_.empty() || slopes_.size() != knots_.size() + 1)
        raise(ErrorCode::invalid_instance,
              "piecewise-linear function needs m knots and m + 1 slopes");
    for (double v : knots_)
        if (!std::isfinite(v))
            raise(ErrorCode::invalid_instance, "h breakpoints must be finite");
    for (double v : slopes_)
        if (!std::isfinite(v))
            raise(ErrorCode::invalid_instance, "h slopes must be finite");
    for (std::size_t j = 1; j < knots_.size(); ++j)
        if (!(knots_[j - 1] < knots_[j]))
            raise(ErrorCode::invalid_instance, "h breakpoints must be strictly increasing");

    // Anchor f(0) = 0: locate the segment containing 0 (j0 = number of knots
    // at or below 0), pin the nearest knot's value from it, then accumulate
    // the remaining knot values outward.
    knot_values_.assign(knots_.size(), 0.0);
    std::size_t j0 = 0;
    while (j0 < knots_.size() && knots_[j0] <= 0.0)
        ++j0;
    if (j0 == 0) {
        knot_values_[0] = slopes_[0] * knots_[0];
        for (std::size_t j = 1; j < knots_.size(); ++j)
            knot_values_[j] = knot_values_[j - 1] + slopes_[j] * (knots_[j] - knots_[j - 1]);
    } else {
        knot_values_[j0 - 1] = slopes_[j0] * knots_[j0 - 1];
        for (std::size_t j = j0 - 1; j > 0; --j)
            knot_values_[j - 1] = knot_values_[j] - slopes_[j] * (knots_[j] - knots_[j - 1]);
        for (std::size_t j = j0; j < knots_.size(); ++j)
            knot_values_[j] = knot_values_[j - 1] + slopes_[j] * (knots_[j] - knots_[j - 1]);
    }
}

double PiecewiseLinearConvex::operator()(double x) const {
    // Segment j holds x when knots_[j-1] <= x < knots_[j]; evaluate from the
    // nearest knot of that segment.
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    const std::size_t seg = static_cast<std::size_t>(it - knots_.begin());
    if (seg == 0)
        return knot_values_[0] + slopes_[0] * (x - knots_[0]);
    return knot_values_[seg - 1] + slopes_[seg] * (x - knots_[seg - 1]);
}

void PiecewiseLinearConvex::validate_cost_shape() const {
    for (std::size_t j = 1; j < slopes_.size(); ++j)
        if (slopes_[j] < slopes_[j - 1] - 1e-12)
            raise(ErrorCode::invalid_instance,
                  "h convexity violated: slopes must be nondecreasing");
    if (!(slopes_.front() < 0.0))
        raise(ErrorCode::invalid_instance,
              "h coercivity violated: leftmost slope must be negative");
    if (!(slopes_.back() > 0.0))
        raise(ErrorCode::invalid_instance,
              "h coercivity violated: rightmost slope must be positive");
    for (std::size_t j = 0; j < knots_.size(); ++j)
        if (knot_values_[j] < -1e-12)
            raise(ErrorCode::invalid_instance, "h >= 0 violated at a breakpoint");
}

DemandPmf::DemandPmf(std::vector<double> support, std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
    if (support_.empty() || support_.size() != probs_.size())
        raise(ErrorCode::invalid_instance, "demand support and probabilities must match");
    double total = 0.0;
    mean_ = 0.0;
    for (std::size_t k = 0; k < support_.size(); ++k) {
        if (!std::isfinite(support_[k]) || support_[k] < 0.0)
            raise(ErrorCode::invalid_instance, "demand support must be nonnegative");
        if (k > 0 && !(support_[k] > support_[k - 1]))
            raise(ErrorCode::invalid_instance, "demand support must be strictly increasing");
        if (!std::isfinite(probs_[k]) || !(probs_[k] > 0.0))
            raise(ErrorCode::invalid_instance, "demand probabilities must be positive");
        total += probs_[k];
        mean_ += probs_[k] * support_[k];
    }
    if (std::abs(total - 1.0) > 1e-12)
        raise(ErrorCode::invalid_instance, "demand probabilities must sum to 1");
    double positive_mass = 0.0;
    for (std::size_t k = 0; k < support_.size(); ++k)
        if (support_[k] > 0.0)
            positive_mass += probs_[k];
    if (!(positive_mass > 0.0))
        raise(ErrorCode::invalid_instance, "P(D > 0) > 0 violated: demand is identically zero");
    cdf_.resize(probs_.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < probs_.size(); ++k) {
        acc += probs_[k];
        cdf_[k] = acc;
    }
    cdf_.back() = 1.0;
}

std::size_t DemandPmf::sample_index(double u) const {
    for (std::size_t k = 0; k + 1 < cdf_.size(); ++k)
        if (u < cdf_[k])
            return k;
    return cdf_.size() - 1;
}

InventoryParams::InventoryParams(double K, double c_bar, PiecewiseLinearConvex h, DemandPmf demand,
                                 Lattice lattice)
    : K_(K), c_bar_(c_bar), h_(std::move(h)), demand_(std::move(demand)), lattice_(lattice) {
    if (!std::isfinite(K_) || K_ < 0.0)
        raise(ErrorCode::invalid_instance, "K >= 0 violated");
    if (!std::isfinite(c_bar_) || !(c_bar_ > 0.0))
        raise(ErrorCode::invalid_instance, "c_bar > 0 violated");
    h_.validate_cost_shape();
    offsets_.reserve(demand_.size());
    for (double d : demand_.support()) {
        std::int64_t k = 0;
        try {
            k = lattice_.offset_of(d);
        } catch (const Error&) {
            raise(ErrorCode::invalid_instance,
                  "demand support value " + std::to_string(d) +
                      " is not a whole number of lattice steps");
        }
        offsets_.push_back(k);
    }
    h_tilde_.resize(static_cast<std::size_t>(lattice_.size()));
    for (std::int64_t i = 0; i < lattice_.size(); ++i)
        h_tilde_[static_cast<std::size_t>(i)] = expected_h(lattice_.x(i));
}

DemandKernel InventoryParams::kernel() const {
    return DemandKernel{offsets_, demand_.probs()};
}

double InventoryParams::expected_h(double x) const {
    double e = 0.0;
    for (std::size_t k = 0; k < demand_.size(); ++k)
        e += demand_.probs()[k] * h_(x - demand_.support()[k]);
    return e;
}

double InventoryParams::one_step_cost(double x, double a) const {
    if (!(a >= 0.0))
        raise(ErrorCode::invalid_argument, "order quantity must be nonnegative");
    return (a > 0.0 ? K_ : 0.0) + c_bar_ * a + expected_h(x + a);
}

double InventoryParams::alpha_star() const noexcept {
    return 1.0 + h_.leftmost_slope() / c_bar_;
}

InventoryBellmanOp::InventoryBellmanOp(const InventoryParams& params, double alpha)
    : params_(&params), alpha_(alpha) {
    const std::size_t n = static_cast<std::size_t>(params.lattice().size());
    g_.resize(n);
    suffix_min_.resize(n);
    suffix_arg_.resize(n);
}

void InventoryBellmanOp::apply(const ValueTable& in, ValueTable& out,
                               std::vector<std::int64_t>& order_steps) const {
    const Lattice& lat = params_->lattice();
    const std::int64_t n = lat.size();
    const auto& off = params_->demand_offsets();
    const auto& p = params_->demand().probs();
    const auto& ht = params_->h_tilde();
    const double cbar = params_->c_bar();
    const double K = params_->K();
    const std::size_t nd = off.size();

    for (std::int64_t y = 0; y < n; ++y) {
        double e = 0.0;
        for (std::size_t k = 0; k < nd; ++k)
            e += p[k] * in.at_extended(y - off[k]);
        g_[static_cast<std::size_t>(y)] =
            cbar * lat.x(y) + ht[static_cast<std::size_t>(y)] + alpha_ * e;
    }

    suffix_min_[static_cast<std::size_t>(n - 1)] = g_[static_cast<std::size_t>(n - 1)];
    suffix_arg_[static_cast<std::size_t>(n - 1)] = n - 1;
    for (std::int64_t y = n - 2; y >= 0; --y) {
        const std::size_t u = static_cast<std::size_t>(y);
        if (g_[u] <= suffix_min_[u + 1]) {
            suffix_min_[u] = g_[u];
            suffix_arg_[u] = y;
        } else {
            suffix_min_[u] = suffix_min_[u + 1];
            suffix_arg_[u] = suffix_arg_[u + 1];
        }
    }

    for (std::int64_t i = 0; i < n; ++i) {
        const std::size_t u = static_cast<std::size_t>(i);
        double best = g_[u];
        std::int64_t target = i;
        if (i + 1 < n) {
            const double ordered = K + suffix_min_[u + 1];
            if (ordered < best) {
                best = ordered;
                target = suffix_arg_[u + 1];
            }
        }
        out[i] = best - cbar * lat.x(i);
        order_steps[u] = target - i;
    }
}

ValueIterationResult solve_discounted(const InventoryParams& params, double alpha,
                                      const ValueIterationOptions& opts) {
    InventoryBellmanOp op(params, alpha);
    ValueIterationOptions o = opts;
    o.anchor_tail_slope = -params.c_bar();
    return value_iteration_with(op, params.lattice(), alpha, o);
}

ValueTable g_alpha(const InventoryParams& params, const ValueTable& v, double alpha) {
    const Lattice& lat = params.lattice();
    const auto& off = params.demand_offsets();
    const auto& p = params.demand().probs();
    std::vector<double> g(static_cast<std::size_t>(lat.size()));
    for (std::int64_t y = 0; y < lat.size(); ++y) {
        double e = 0.0;
        for (std::size_t k = 0; k < off.size(); ++k)
            e += p[k] * v.at_extended(y - off[k]);
        g[static_cast<std::size_t>(y)] =
            params.c_bar() * lat.x(y) + params.h_tilde()[static_cast<std::size_t>(y)] + alpha * e;
    }
    return ValueTable(lat, std::move(g));
}

double renewal_mean(const InventoryParams& params, double t) {
    if (!(t >= 0.0))
        raise(ErrorCode::invalid_argument, "renewal horizon t must be nonnegative");
    const double step = params.lattice().step();
    const std::int64_t kt = params.lattice().offset_of(t);
    const auto& off = params.demand_offsets();
    const auto& p = params.demand().probs();

    // P(S_n = k step) for k <= kt; mass above kt is dropped (those paths have
    // already exceeded t and never return).
    std::vector<double> cur(static_cast<std::size_t>(kt) + 1, 0.0);
    std::vector<double> next(cur.size(), 0.0);
    cur[0] = 1.0;
    double total = 0.0;
    for (int iter = 0; iter < 1000000; ++iter) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t j = 0; j < cur.size(); ++j) {
            if (cur[j] == 0.0)
                continue;
            for (std::size_t k = 0; k < off.size(); ++k) {
                const std::int64_t s2 = static_cast<std::int64_t>(j) + off[k];
                if (s2 <= kt)
                    next[static_cast<std::size_t>(s2)] += cur[j] * p[k];
            }
        }
        double term = 0.0;
        for (double v : next)
            term += v;
        total += term;
        if (term < 1e-10)
            return total;
        std::swap(cur, next);
    }
    raise(ErrorCode::internal, "renewal series failed to exhaust its mass");
}

ValueTable UpperBound::inflated(double z) const {
    std::vector<double> v(mean.values());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] += z * std_err[i];
    return ValueTable(mean.lattice(), std::move(v));
}

UpperBound upper_bound_U(const InventoryParams& params, double x_L, double x_U,
                         std::uint64_t seed, std::int64_t paths,
                         const std::vector<double>* argmins) {
    const Lattice& lat = params.lattice();
    if (!(x_L <= x_U))
        raise(ErrorCode::invalid_argument, "bounding box needs x_L <= x_U");
    if (paths < 2)
        raise(ErrorCode::invalid_argument, "upper bound needs at least 2 Monte Carlo paths");
    if (argmins)
        for (double a : *argmins)
            if (a < x_L - 1e-12 || a > x_U + 1e-12)
                raise(ErrorCode::bounding_box,
                      "bounding box [" + std::to_string(x_L) + ", " + std::to_string(x_U) +
                          "] misses the discounted minimizer at " + std::to_string(a));

    const std::int64_t iL = lat.index_of(x_L);
    const std::int64_t n = lat.size();
    const std::size_t m = static_cast<std::size_t>(n - iL);
    const auto& dsup = params.demand().support();

    // One shared set of demand paths serves every state at or above x_L: for a
    // path's partial sums S_1 < S_2 < ..., the overshoot sample for state x is
    // h(x - S_j) with S_j the first sum exceeding x - x_L. Sums grow with x, so
    // a single forward pointer per path covers the whole column.
    std::vector<double> acc(m, 0.0), acc2(m, 0.0);
    for (std::int64_t path = 0; path < paths; ++path) {
        const std::uint64_t stream = rng::derive_stream(seed, static_cast<std::uint64_t>(path));
        std::uint64_t t = 0;
        double sum = dsup[params.demand().sample_index(rng::unit_double(rng::draw(stream, t++)))];
        for (std::size_t j = 0; j < m; ++j) {
            const double y = lat.x(iL + static_cast<std::int64_t>(j)) - x_L;
            while (sum <= y)
                sum += dsup[params.demand().sample_index(rng::unit_double(rng::draw(stream, t++)))];
            const double hv = params.h()(lat.x(iL + static_cast<std::int64_t>(j)) - sum);
            acc[j] += hv;
            acc2[j] += hv * hv;
        }
    }

    std::vector<double> u_vals(static_cast<std::size_t>(n), 0.0);
    std::vector<double> se(static_cast<std::size_t>(n), 0.0);
    const double K = params.K();
    const double cbar = params.c_bar();
    const double mu = params.demand().mean();
    for (std::int64_t i = 0; i < n; ++i) {
        const double x = lat.x(i);
        if (i < iL) {
            u_vals[static_cast<std::size_t>(i)] = K + cbar * (x_U - x);
            continue;
        }
        const std::size_t j = static_cast<std::size_t>(i - iL);
        const double np = static_cast<double>(paths);
        const double ey = acc[j] / np;
        const double var = std::max(0.0, acc2[j] / np - ey * ey);
        const double ey_se = std::sqrt(var / np);
        const double renew = 1.0 + renewal_mean(params, x - x_L);
        u_vals[static_cast<std::size_t>(i)] =
            K + cbar * (x_U - x_L) + (params.h()(x) + ey + cbar * mu) * renew;
        se[static_cast<std::size_t>(i)] = ey_se * renew;
    }
    return UpperBound{ValueTable(lat, std::move(u_vals)), std::move(se)};
}

} // namespace acoelab

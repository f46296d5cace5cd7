#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "acoelab/errors.hpp"
#include "acoelab/rng.hpp"

using namespace acoelab;

namespace oracles {

ValueTable bellman_brute(const CostFn& cost, const DemandKernel& kernel, const ValueTable& v,
                         double alpha) {
    const Lattice& lat = v.lattice();
    const std::int64_t n = lat.size();
    std::vector<double> out(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::int64_t a = 0; i + a < n; ++a) {
            double e = 0.0;
            for (std::size_t k = 0; k < kernel.offsets.size(); ++k)
                e += kernel.probs[k] * v.at_extended(i + a - kernel.offsets[k]);
            best = std::min(best,
                            cost(lat.x(i), lat.step() * static_cast<double>(a)) + alpha * e);
        }
        out[static_cast<std::size_t>(i)] = best;
    }
    return ValueTable(lat, std::move(out));
}

std::vector<double> solve_linear(std::vector<double> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r * n + col]) > std::abs(A[pivot * n + col]))
                pivot = r;
        if (A[pivot * n + col] == 0.0)
            raise(ErrorCode::internal, "singular system in the test oracle");
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c)
                std::swap(A[col * n + c], A[pivot * n + c]);
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = A[r * n + col] / A[col * n + col];
            if (f == 0.0)
                continue;
            for (std::size_t c = col; c < n; ++c)
                A[r * n + c] -= f * A[col * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> z(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double acc = b[r];
        for (std::size_t c = r + 1; c < n; ++c)
            acc -= A[r * n + c] * z[c];
        z[r] = acc / A[r * n + r];
    }
    return z;
}

std::vector<double> evaluate_ss_exact(const InventoryParams& params, std::int64_t s_i,
                                      std::int64_t S_i, double alpha) {
    const Lattice& lat = params.lattice();
    const std::size_t n = static_cast<std::size_t>(lat.size());
    const auto& off = params.demand_offsets();
    const auto& p = params.demand().probs();
    const double cbar = params.c_bar();
    const double step = lat.step();

    std::vector<double> A(n * n, 0.0);
    std::vector<double> b(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        A[i * n + i] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t y;
        if (static_cast<std::int64_t>(i) < s_i) {
            y = S_i;
            const double a = step * static_cast<double>(S_i - static_cast<std::int64_t>(i));
            b[i] = params.K() + cbar * a + params.h_tilde()[static_cast<std::size_t>(y)];
        } else {
            y = static_cast<std::int64_t>(i);
            b[i] = params.h_tilde()[i];
        }
        for (std::size_t k = 0; k < off.size(); ++k) {
            const std::int64_t j = y - off[k];
            if (j >= 0) {
                A[i * n + static_cast<std::size_t>(j)] -= alpha * p[k];
            } else {
                // v(z) = v(x_min) + c_bar (x_min - z) below the grid.
                A[i * n + 0] -= alpha * p[k];
                b[i] += alpha * p[k] * cbar * step * static_cast<double>(-j);
            }
        }
    }
    return solve_linear(std::move(A), std::move(b));
}

EnumerationBest enumerate_ss(const InventoryParams& params, double alpha, std::int64_t x0_i) {
    const std::int64_t n = params.lattice().size();
    EnumerationBest best;
    best.value = std::numeric_limits<double>::infinity();
    for (std::int64_t S_i = 0; S_i < n; ++S_i) {
        for (std::int64_t s_i = 0; s_i <= S_i; ++s_i) {
            const std::vector<double> v = evaluate_ss_exact(params, s_i, S_i, alpha);
            const double val = v[static_cast<std::size_t>(x0_i)];
            if (val < best.value) {
                best = EnumerationBest{s_i, S_i, val};
            }
        }
    }
    return best;
}

RviResult relative_value_iteration(const InventoryParams& params, double tol,
                                   std::int64_t max_iter) {
    const Lattice& lat = params.lattice();
    const std::int64_t n = lat.size();
    const auto& off = params.demand_offsets();
    const auto& p = params.demand().probs();
    const auto& ht = params.h_tilde();
    const double cbar = params.c_bar();
    const double K = params.K();
    const double step = lat.step();

    std::vector<double> u(static_cast<std::size_t>(n), 0.0);
    std::vector<double> H(static_cast<std::size_t>(n)), M(static_cast<std::size_t>(n)),
        Tu(static_cast<std::size_t>(n));
    for (std::int64_t it = 1; it <= max_iter; ++it) {
        for (std::int64_t y = 0; y < n; ++y) {
            double e = 0.0;
            for (std::size_t k = 0; k < off.size(); ++k) {
                const std::int64_t j = y - off[k];
                e += p[k] * (j >= 0 ? u[static_cast<std::size_t>(j)]
                                    : u[0] + cbar * step * static_cast<double>(-j));
            }
            H[static_cast<std::size_t>(y)] =
                cbar * lat.x(y) + ht[static_cast<std::size_t>(y)] + e;
        }
        M[static_cast<std::size_t>(n - 1)] = H[static_cast<std::size_t>(n - 1)];
        for (std::int64_t y = n - 2; y >= 0; --y)
            M[static_cast<std::size_t>(y)] =
                std::min(H[static_cast<std::size_t>(y)], M[static_cast<std::size_t>(y + 1)]);
        for (std::int64_t i = 0; i < n; ++i) {
            double v0 = H[static_cast<std::size_t>(i)];
            if (i + 1 < n)
                v0 = std::min(v0, K + M[static_cast<std::size_t>(i + 1)]);
            Tu[static_cast<std::size_t>(i)] = v0 - cbar * lat.x(i);
        }
        double dmin = std::numeric_limits<double>::infinity();
        double dmax = -std::numeric_limits<double>::infinity();
        for (std::int64_t i = 0; i < n; ++i) {
            const double d = Tu[static_cast<std::size_t>(i)] - u[static_cast<std::size_t>(i)];
            dmin = std::min(dmin, d);
            dmax = std::max(dmax, d);
        }
        const double umin = *std::min_element(Tu.begin(), Tu.end());
        for (std::int64_t i = 0; i < n; ++i)
            u[static_cast<std::size_t>(i)] = Tu[static_cast<std::size_t>(i)] - umin;
        if (dmax - dmin <= tol)
            return RviResult{0.5 * (dmax + dmin), u, it, dmax - dmin};
    }
    raise(ErrorCode::non_convergence, "relative value iteration hit its iteration cap");
}

double renewal_mean_mc(const InventoryParams& params, double t, std::int64_t paths,
                       std::uint64_t seed) {
    const auto& dsup = params.demand().support();
    double total = 0.0;
    for (std::int64_t path = 0; path < paths; ++path) {
        const std::uint64_t stream = rng::derive_stream(seed, static_cast<std::uint64_t>(path));
        std::uint64_t k = 0;
        double sum = 0.0;
        std::int64_t count = 0;
        while (true) {
            sum += dsup[params.demand().sample_index(rng::unit_double(rng::draw(stream, k++)))];
            if (sum > t)
                break;
            ++count;
        }
        total += static_cast<double>(count);
    }
    return total / static_cast<double>(paths);
}

} // namespace oracles

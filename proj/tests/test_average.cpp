#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "acoelab/average.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace acoelab;

TEST_CASE("H reduces to c_bar x + h~ when u~ vanishes") {
    const InventoryParams params = fixtures::tiny();
    ValueTable u = ValueTable::zeros(params.lattice());
    u.anchor_below_grid(0.0);
    const ValueTable H = h_function(params, u);
    for (std::int64_t i = 0; i < H.size(); ++i)
        CHECK(H[i] == doctest::Approx(params.c_bar() * params.lattice().x(i) +
                                      params.h_tilde()[static_cast<std::size_t>(i)])
                          .epsilon(1e-12));
}

TEST_CASE("the average-cost tail formula is applied below the grid") {
    const InventoryParams params = fixtures::tiny();
    const Lattice& lat = params.lattice();
    std::vector<double> uv;
    for (std::int64_t i = 0; i < lat.size(); ++i)
        uv.push_back(0.25 * lat.x(i) * lat.x(i)); // any table; only the tail matters
    ValueTable u(lat, uv);
    u.anchor_below_grid(-params.c_bar());

    const double w = 1.5, S_star = 1.0;
    const AcoeTail tail{w, S_star};
    const ValueTable H = h_function(params, u, &tail);

    // Self-consistency at the lowest state: demand 1 falls one step below the
    // grid, where u~ continues as K + H(S*) - c_bar z - w.
    const double z = lat.x_min() - lat.step();
    const double u_below = params.K() + H[lat.index_of(S_star)] - params.c_bar() * z - w;
    const double expected = params.c_bar() * lat.x_min() +
                            params.h_tilde()[0] +
                            0.4 * u[0] + 0.6 * u_below;
    CHECK(H[0] == doctest::Approx(expected).epsilon(1e-12));

    // Away from the bottom the tail is irrelevant.
    const ValueTable H_own = h_function(params, u);
    for (std::int64_t i = 1; i < lat.size(); ++i)
        CHECK(H[i] == H_own[i]);

    // S* inside the demand reach of x_min leaves H(S*) unformed.
    const AcoeTail bad{w, lat.x_min()};
    try {
        h_function(params, u, &bad);
        FAIL("expected a truncation complaint");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::truncation_underflow);
        CHECK(std::string(e.what()).find("S* sits within demand reach") != std::string::npos);
    }
}

TEST_CASE("the ACOE residual vanishes at a relative-value-iteration fixed point") {
    const InventoryParams params = fixtures::tiny();
    const oracles::RviResult rvi = oracles::relative_value_iteration(params, 1e-11, 2'000'000);
    ValueTable u(params.lattice(), rvi.u);
    u.anchor_below_grid(-params.c_bar());
    const ValueTable H = h_function(params, u);
    const AcoeResidual res = acoe_residual(params, rvi.w, u, H);
    CHECK(res.value <= 1e-8);
    CHECK(res.value >= 0.0);

    // With a wrong w the residual is exactly shifted.
    const AcoeResidual off = acoe_residual(params, rvi.w + 0.25, u, H);
    CHECK(off.value == doctest::Approx(res.value + 0.25).epsilon(1e-6));
}

TEST_CASE("ACOI verification separates optimal from bad policies") {
    const InventoryParams params = fixtures::tiny();
    const oracles::RviResult rvi = oracles::relative_value_iteration(params, 1e-11, 2'000'000);
    ValueTable u(params.lattice(), rvi.u);
    u.anchor_below_grid(-params.c_bar());
    const ValueTable H = h_function(params, u);
    const SsPolicy pol = extract_ss(H, params.K());

    const double defect =
        verify_acoi(params, rvi.w, u, policy_to_tabular(pol, params.lattice()));
    CHECK(defect <= 1e-8);

    const TabularPolicy never_order(
        params.lattice(), std::vector<double>(static_cast<std::size_t>(params.lattice().size()), 0.0));
    CHECK(verify_acoi(params, rvi.w, u, never_order) > 0.5);
}

TEST_CASE("equicontinuity modulus over lattice windows") {
    const Lattice lat(0.0, 2.0, 1.0);
    const ValueTable t1(lat, {0.0, 1.0, 5.0});
    const std::vector<ValueTable> one{t1};
    CHECK(equicontinuity_modulus(one, 1.0) == doctest::Approx(4.0));
    CHECK(equicontinuity_modulus(one, 2.0) == doctest::Approx(5.0));
    CHECK(equicontinuity_modulus(one, 0.0) == 0.0);

    const ValueTable t2(lat, {0.0, -6.0, -6.0});
    const std::vector<ValueTable> two{t1, t2};
    CHECK(equicontinuity_modulus(two, 1.0) == doctest::Approx(6.0));

    CHECK_THROWS_AS(equicontinuity_modulus(std::vector<ValueTable>{}, 1.0), Error);
    CHECK_THROWS_AS(equicontinuity_modulus(one, -1.0), Error);
}

TEST_CASE("the two-action gap reads H at s and S") {
    const InventoryParams params = fixtures::tiny();
    const Lattice& lat = params.lattice();
    std::vector<double> hv;
    for (std::int64_t i = 0; i < lat.size(); ++i)
        hv.push_back(static_cast<double>(i));
    const ValueTable H(lat, hv);
    const SsPolicy pol{lat.x(2), lat.x(5)};
    // |K + H(S) - H(s)| = |2 + 5 - 2| = 5.
    CHECK(two_actions_gap(params, H, pol) == doctest::Approx(5.0));
}

TEST_CASE("schedule validation") {
    const InventoryParams params = fixtures::tiny();
    const std::vector<double> empty;
    CHECK_THROWS_AS(vanishing_discount(params, empty), Error);

    const std::vector<double> decreasing{0.9, 0.8};
    try {
        vanishing_discount(params, decreasing);
        FAIL("expected a schedule rejection");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::invalid_argument);
        CHECK(std::string(e.what()).find("strictly increasing") != std::string::npos);
    }

    const std::vector<double> out_of_range{0.9, 1.0};
    try {
        vanishing_discount(params, out_of_range);
        FAIL("expected a schedule rejection");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("[0, 1)") != std::string::npos);
    }

    // Leftmost h slope -0.5 against c_bar = 1 puts alpha* at 0.5; schedules
    // must start strictly above it.
    InventoryParams mild(1.0, 1.0, PiecewiseLinearConvex({0.0}, {-0.5, 1.0}),
                         DemandPmf({0.0, 1.0}, {0.5, 0.5}), Lattice(-8.0, 8.0, 1.0));
    const std::vector<double> too_low{0.3, 0.9};
    try {
        vanishing_discount(mild, too_low);
        FAIL("expected a precondition failure");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::precondition);
        CHECK(std::string(e.what()).find("alpha*") != std::string::npos);
        CHECK(std::string(e.what()).find("0.5") != std::string::npos);
    }
}

TEST_CASE("single-alpha schedules carry a warning") {
    const InventoryParams params = fixtures::tiny();
    const std::vector<double> one{0.9};
    VanishingOptions opts;
    opts.mc_paths = 2000;
    const AverageSolution sol = vanishing_discount(params, one, opts);
    REQUIRE(sol.warnings.size() == 1);
    CHECK(sol.warnings[0].find("single-alpha") != std::string::npos);
    CHECK(sol.alphas == std::vector<double>{0.9});
}

TEST_CASE("vanishing-discount construction on the small instance") {
    const InventoryParams params = fixtures::tiny();
    const std::vector<double> schedule{0.9, 0.99, 0.999, 0.9999};
    VanishingOptions opts;
    opts.mc_paths = 20000;
    const AverageSolution sol = vanishing_discount(params, schedule, opts);

    // Independent oracle: relative value iteration on the same chain.
    const oracles::RviResult rvi = oracles::relative_value_iteration(params, 1e-11, 2'000'000);
    CHECK(sol.w == doctest::Approx(rvi.w).epsilon(5e-4));
    CHECK(sol.settled);
    CHECK(sol.warnings.empty());

    REQUIRE(sol.u_alphas.size() == 4);
    REQUIRE(sol.w_sequence.size() == 4);
    REQUIRE(sol.ss_sequence.size() == 4);
    REQUIRE(sol.iterations.size() == 4);
    CHECK(sol.policy.s == sol.ss_sequence.back().s);
    CHECK(sol.policy.S == sol.ss_sequence.back().S);
    CHECK(sol.acoe_residual >= 0.0);
    CHECK(sol.residual_argmax_x >= params.lattice().x_min());

    // Every table in the report is K-convex for this instance.
    REQUIRE(sol.k_convexity.size() == 2 * 4 + 2);
    std::vector<std::string> names;
    for (const auto& entry : sol.k_convexity) {
        names.push_back(entry.table);
        CHECK(entry.report.is_k_convex);
    }
    CHECK(std::find(names.begin(), names.end(), "g_alpha_1") != names.end());
    CHECK(std::find(names.begin(), names.end(), "u_alpha_4") != names.end());
    CHECK(std::find(names.begin(), names.end(), "u_tilde") != names.end());
    CHECK(std::find(names.begin(), names.end(), "H") != names.end());

    CHECK(sol.bounds_ok);
    CHECK(sol.bounds_max_excess <= 0.0);
    CHECK(sol.x_lower < sol.x_upper);
    CHECK(sol.equicontinuity > 0.0);
    CHECK(sol.equicontinuity_delta == params.lattice().step());
    CHECK(sol.two_actions >= 0.0);
    CHECK(sol.mc_paths == 20000);
}

#include <doctest.h>

#include <cmath>
#include <string>

#include "acoelab/lattice.hpp"

using namespace acoelab;

TEST_CASE("lattice construction and closure") {
    Lattice lat(-3.0, 4.0, 0.5);
    CHECK(lat.size() == 15);
    CHECK(lat.x(0) == -3.0);
    CHECK(lat.x(14) == doctest::Approx(4.0));
    CHECK(lat.x(-2) == doctest::Approx(-4.0)); // virtual points below the grid

    CHECK_THROWS_AS(Lattice(0.0, 1.0, 0.3), Error);   // 1/0.3 is not whole
    CHECK_THROWS_AS(Lattice(0.0, 0.0, 1.0), Error);   // empty span
    CHECK_THROWS_AS(Lattice(1.0, 0.0, 1.0), Error);   // reversed
    CHECK_THROWS_AS(Lattice(0.0, 1.0, -1.0), Error);  // negative step
    try {
        Lattice(0.0, 1.0, 0.3);
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::invalid_argument);
    }
}

TEST_CASE("lattice indexing") {
    Lattice lat(-2.0, 2.0, 0.5);
    CHECK(lat.index_of(-2.0) == 0);
    CHECK(lat.index_of(0.5) == 5);
    CHECK(lat.index_of(2.0) == 8);
    CHECK_THROWS_AS(lat.index_of(0.3), Error);
    CHECK_THROWS_AS(lat.index_of(2.5), Error);

    CHECK(lat.offset_of(1.5) == 3);
    CHECK(lat.offset_of(-1.0) == -2);
    CHECK(lat.offset_of(0.0) == 0);
    CHECK_THROWS_AS(lat.offset_of(0.75), Error);

    CHECK(lat.contains(1.0));
    CHECK(!lat.contains(1.2));
    CHECK(!lat.contains(-2.5));

    CHECK(lat == Lattice(-2.0, 2.0, 0.5));
    CHECK(!(lat == Lattice(-2.0, 2.5, 0.5)));
}

TEST_CASE("value table basics") {
    Lattice lat(0.0, 3.0, 1.0);
    ValueTable t(lat, {4.0, 2.0, 2.0, 7.0});
    CHECK(t.size() == 4);
    CHECK(t[0] == 4.0);
    CHECK(t.min() == 2.0);
    CHECK(t.argmin() == 1); // smallest index on a tie

    CHECK_THROWS_AS(ValueTable(lat, {1.0, 2.0}), Error);
    CHECK_THROWS_AS(ValueTable(lat, {1.0, 2.0, std::nan(""), 4.0}), Error);
}

TEST_CASE("below-grid extension") {
    Lattice lat(0.0, 3.0, 1.0);
    ValueTable t(lat, {4.0, 2.0, 1.0, 7.0});

    CHECK_THROWS_AS(t.at_extended(-1), Error);
    try {
        t.at_extended(-1);
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::truncation_underflow);
    }
    CHECK_THROWS_AS(t.at_extended(4), Error); // above the top is always an error

    t.anchor_below_grid(-2.0);
    REQUIRE(t.below_grid().has_value());
    CHECK(t.below_grid()->slope == -2.0);
    // Tail passes through (x_min, v[0]) = (0, 4).
    CHECK(t.at_extended(-1) == doctest::Approx(6.0));
    CHECK(t.at_extended(-3) == doctest::Approx(10.0));
    CHECK(t.at_extended(0) == 4.0);

    LinearTail tail{1.5, -0.5};
    CHECK(tail(2.0) == doctest::Approx(2.5));
}

TEST_CASE("tabular policy validation") {
    Lattice lat(0.0, 3.0, 1.0);
    TabularPolicy pol(lat, {3.0, 1.0, 0.0, 0.0});
    CHECK(pol.order(0) == 3.0);
    CHECK(pol.order_steps(0) == 3);
    CHECK(pol.order_steps(2) == 0);

    CHECK_THROWS_AS(TabularPolicy(lat, {0.0, 0.0, 0.0, 1.0}), Error); // overshoots the top
    CHECK_THROWS_AS(TabularPolicy(lat, {-1.0, 0.0, 0.0, 0.0}), Error);
    CHECK_THROWS_AS(TabularPolicy(lat, {0.5, 0.0, 0.0, 0.0}), Error); // off the lattice
    CHECK_THROWS_AS(TabularPolicy(lat, {0.0, 0.0, 0.0}), Error);     // wrong length
    try {
        TabularPolicy(lat, {0.0, 0.0, 0.0, 1.0});
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("upper edge") != std::string::npos);
    }
}

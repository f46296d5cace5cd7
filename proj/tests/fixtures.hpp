// Canonical test instances, constructed directly against the library API.
#pragma once

#include "acoelab/inventory.hpp"

namespace fixtures {

// K = 10, c_bar = 1, h = 2 x^+ + 3 x^-, D in {0, 1, 2} with p = {.3, .4, .3}.
inline acoelab::InventoryParams instance_a(double x_min = -30.0, double x_max = 40.0,
                                           double step = 1.0) {
    return acoelab::InventoryParams(
        10.0, 1.0, acoelab::PiecewiseLinearConvex({0.0}, {-3.0, 2.0}),
        acoelab::DemandPmf({0.0, 1.0, 2.0}, {0.3, 0.4, 0.3}),
        acoelab::Lattice(x_min, x_max, step));
}

// K = 2, c_bar = 1, h = |x|, D in {0, 1} with p = {.4, .6}, lattice [-6, 8].
inline acoelab::InventoryParams tiny() {
    return acoelab::InventoryParams(2.0, 1.0, acoelab::PiecewiseLinearConvex({0.0}, {-1.0, 1.0}),
                                    acoelab::DemandPmf({0.0, 1.0}, {0.4, 0.6}),
                                    acoelab::Lattice(-6.0, 8.0, 1.0));
}

} // namespace fixtures

#pragma once

#include <string>

#include "acoelab/inventory.hpp"

namespace acoelab {

/// Parses an instance from JSON:
///
///   {
///     "K": 10.0,
///     "c_bar": 1.0,
///     "h_breakpoints": [[-1.0, -3.0], [0.0, 2.0]],
///     "demand": {"support": [0, 1, 2], "probs": [0.3, 0.4, 0.3]},
///     "lattice": {"x_min": -30.0, "x_max": 40.0, "step": 1.0}
///   }
///
/// h_breakpoints lists [x, slope_right] pairs with strictly increasing x; each
/// slope applies from its x to the next breakpoint, the first also extends to
/// -inf (so the first x only needs to sit below the second), and the last to
/// +inf. h is anchored at h(0) = 0. "lattice" may be omitted, in which case a
/// default grid is derived: the step comes from the demand support, the center
/// is the myopic order-up-to minimizer of c_bar y + E h(y - D), and the span
/// is 40 demand scales (max of the demand standard deviation and one step) on
/// each side.
InventoryParams instance_from_json(const std::string& json_text);

InventoryParams instance_from_file(const std::string& path);

/// Serializes an instance back to its JSON form (lattice always explicit).
std::string instance_to_json(const InventoryParams& params);

} // namespace acoelab

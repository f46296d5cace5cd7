#include "acoelab/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace acoelab {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_number())
        raise(ErrorCode::parse_error, "instance field '" + key + "' is missing or not a number");
    return j[key].get<double>();
}

PiecewiseLinearConvex parse_h(const json& j) {
    if (!j.contains("h_breakpoints") || !j["h_breakpoints"].is_array() ||
        j["h_breakpoints"].size() < 2)
        raise(ErrorCode::parse_error,
              "instance field 'h_breakpoints' must be an array of at least two [x, slope] pairs");
    std::vector<double> xs, slopes;
    for (const auto& entry : j["h_breakpoints"]) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
            !entry[1].is_number())
            raise(ErrorCode::parse_error, "each h breakpoint must be an [x, slope] pair");
        xs.push_back(entry[0].get<double>());
        slopes.push_back(entry[1].get<double>());
    }
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i - 1] < xs[i]))
            raise(ErrorCode::invalid_instance, "h breakpoints must be strictly increasing");
    // The first pair's slope is the left tail; its x is only a position marker,
    // so the knots are the remaining xs.
    std::vector<double> knots(xs.begin() + 1, xs.end());
    return PiecewiseLinearConvex(std::move(knots), std::move(slopes));
}

DemandPmf parse_demand(const json& j) {
    if (!j.contains("demand") || !j["demand"].is_object())
        raise(ErrorCode::parse_error, "instance field 'demand' is missing");
    const json& d = j["demand"];
    if (!d.contains("support") || !d.contains("probs") || !d["support"].is_array() ||
        !d["probs"].is_array())
        raise(ErrorCode::parse_error, "demand needs 'support' and 'probs' arrays");
    std::vector<double> support, probs;
    for (const auto& v : d["support"]) {
        if (!v.is_number())
            raise(ErrorCode::parse_error, "demand support entries must be numbers");
        support.push_back(v.get<double>());
    }
    for (const auto& v : d["probs"]) {
        if (!v.is_number())
            raise(ErrorCode::parse_error, "demand probability entries must be numbers");
        probs.push_back(v.get<double>());
    }
    return DemandPmf(std::move(support), std::move(probs));
}

double demand_step(const DemandPmf& demand) {
    double step = 0.0;
    for (double v : demand.support())
        if (v > 0.0) {
            step = v;
            break;
        }
    if (step == 0.0)
        raise(ErrorCode::invalid_instance, "cannot derive a lattice step from the demand support");
    for (double v : demand.support()) {
        if (v == 0.0)
            continue;
        const double k = v / step;
        if (std::abs(k - std::round(k)) > 1e-9)
            raise(ErrorCode::invalid_instance,
                  "cannot derive a lattice: demand support values are not commensurate");
    }
    return step;
}

Lattice default_lattice(const PiecewiseLinearConvex& h, const DemandPmf& demand) {
    const double step = demand_step(demand);
    double m2 = 0.0;
    for (std::size_t k = 0; k < demand.size(); ++k)
        m2 += demand.probs()[k] * demand.support()[k] * demand.support()[k];
    const double sd = std::sqrt(std::max(0.0, m2 - demand.mean() * demand.mean()));
    const double scale = std::max(sd, step);

    // Myopic order-up-to target: the minimizer of m(y) = c_bar y + E h(y - D)
    // with c_bar = 1 scale-free; m is convex piecewise linear, so the minimum
    // sits at one of the shifted h-knots (or at 0).
    std::vector<double> candidates{0.0};
    for (double knot : h.knots())
        for (double d : demand.support())
            candidates.push_back(knot + d);
    double best_y = candidates.front();
    double best_v = std::numeric_limits<double>::infinity();
    for (double y : candidates) {
        double e = 0.0;
        for (std::size_t k = 0; k < demand.size(); ++k)
            e += demand.probs()[k] * h(y - demand.support()[k]);
        const double v = y + e;
        if (v < best_v - 1e-12 || (std::abs(v - best_v) <= 1e-12 && y < best_y)) {
            best_v = v;
            best_y = y;
        }
    }

    const double lo = std::floor((best_y - 40.0 * scale) / step) * step;
    const double hi = std::ceil((best_y + 40.0 * scale) / step) * step;
    return Lattice(lo, hi, step);
}

} // namespace

InventoryParams instance_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        raise(ErrorCode::parse_error, std::string("malformed instance JSON: ") + e.what());
    }
    if (!j.is_object())
        raise(ErrorCode::parse_error, "instance JSON must be an object");

    const double K = require_number(j, "K");
    const double c_bar = require_number(j, "c_bar");
    PiecewiseLinearConvex h = parse_h(j);
    DemandPmf demand = parse_demand(j);

    if (j.contains("lattice")) {
        const json& l = j["lattice"];
        if (!l.is_object())
            raise(ErrorCode::parse_error, "instance field 'lattice' must be an object");
        const double x_min = require_number(l, "x_min");
        const double x_max = require_number(l, "x_max");
        const double step = require_number(l, "step");
        return InventoryParams(K, c_bar, std::move(h), std::move(demand),
                               Lattice(x_min, x_max, step));
    }
    Lattice lat = default_lattice(h, demand);
    return InventoryParams(K, c_bar, std::move(h), std::move(demand), lat);
}

InventoryParams instance_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        raise(ErrorCode::io_error, "cannot open instance file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return instance_from_json(buf.str());
}

std::string instance_to_json(const InventoryParams& params) {
    json j;
    j["K"] = params.K();
    j["c_bar"] = params.c_bar();
    json bp = json::array();
    const auto& knots = params.h().knots();
    const auto& slopes = params.h().slopes();
    const double first_x = knots.front() - 1.0;
    bp.push_back(json::array({first_x, slopes[0]}));
    for (std::size_t i = 0; i < knots.size(); ++i)
        bp.push_back(json::array({knots[i], slopes[i + 1]}));
    j["h_breakpoints"] = bp;
    j["demand"]["support"] = params.demand().support();
    j["demand"]["probs"] = params.demand().probs();
    j["lattice"]["x_min"] = params.lattice().x_min();
    j["lattice"]["x_max"] = params.lattice().x_max();
    j["lattice"]["step"] = params.lattice().step();
    return j.dump(2);
}

} // namespace acoelab

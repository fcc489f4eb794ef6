#include "json_util.hpp"

#include <algorithm>

namespace qpart::detail {

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& where) {
    if (!j.is_object()) {
        throw ValidationError(where + ": expected an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end()) {
            throw ValidationError(where + ": unknown key '" + key + "'");
        }
    }
}

json axis_to_json(const AxisSpec& a) {
    return json{{"coordinate", a.coordinate},
                {"range", json::array({a.lo, a.hi})},
                {"samples", a.samples},
                {"topology", a.topology == CoordinateTopology::circle ? "circle" : "line"}};
}

AxisSpec axis_from_json(const json& j) {
    require_keys(j, {"coordinate", "range", "samples", "topology"}, "domain axis");
    AxisSpec a;
    a.coordinate = j.at("coordinate").get<int>();
    const auto& range = j.at("range");
    if (!range.is_array() || range.size() != 2) {
        throw ValidationError("domain axis: range must be [lo, hi]");
    }
    a.lo = range[0].get<double>();
    a.hi = range[1].get<double>();
    a.samples = j.at("samples").get<int>();
    const std::string topo = j.at("topology").get<std::string>();
    if (topo == "circle") {
        a.topology = CoordinateTopology::circle;
    } else if (topo == "line") {
        a.topology = CoordinateTopology::line;
    } else {
        throw ValidationError("domain axis: topology must be 'line' or 'circle'");
    }
    return a;
}

json domain_to_json(const ScanDomain& d) {
    json fixed = json::array();
    for (const auto& [coord, value] : d.fixed) {
        fixed.push_back(json::array({coord, value}));
    }
    return json{{"axes", json::array({axis_to_json(d.axes[0]), axis_to_json(d.axes[1])})},
                {"fixed", fixed},
                {"theta0", d.initial_phase}};
}

ScanDomain domain_from_json(const json& j) {
    require_keys(j, {"axes", "fixed", "theta0"}, "domain");
    ScanDomain d;
    const auto& axes = j.at("axes");
    if (!axes.is_array() || axes.size() != 2) {
        throw ValidationError("domain: exactly two axes required");
    }
    d.axes[0] = axis_from_json(axes[0]);
    d.axes[1] = axis_from_json(axes[1]);
    if (j.contains("fixed")) {
        for (const auto& pair : j.at("fixed")) {
            if (!pair.is_array() || pair.size() != 2) {
                throw ValidationError("domain: fixed entries must be [coordinate, value]");
            }
            d.fixed.emplace_back(pair[0].get<int>(), pair[1].get<double>());
        }
    }
    if (j.contains("theta0")) {
        d.initial_phase = j.at("theta0").get<std::vector<double>>();
    }
    return d;
}

json integrator_config_to_json(const IntegratorConfig& c) {
    return json{{"scheme", c.scheme == Scheme::symplectic4 ? "symplectic4" : "rk4"},
                {"step", c.step},
                {"horizon", c.horizon},
                {"checkpoint_stride", c.checkpoint_stride}};
}

IntegratorConfig integrator_config_from_json(const json& j) {
    require_keys(j, {"scheme", "step", "horizon", "checkpoint_stride"}, "integrator");
    IntegratorConfig c;
    const std::string scheme = j.at("scheme").get<std::string>();
    if (scheme == "rk4") {
        c.scheme = Scheme::rk4;
    } else if (scheme == "symplectic4") {
        c.scheme = Scheme::symplectic4;
    } else {
        throw ValidationError("integrator: scheme must be 'rk4' or 'symplectic4'");
    }
    c.step = j.at("step").get<double>();
    c.horizon = j.at("horizon").get<double>();
    c.checkpoint_stride = j.at("checkpoint_stride").get<long>();
    return c;
}

json escape_to_json(const EscapePredicate& e) {
    return json{{"coordinate", e.coordinate},
                {"threshold", e.threshold},
                {"consecutive_steps", e.consecutive_steps}};
}

EscapePredicate escape_from_json(const json& j) {
    require_keys(j, {"coordinate", "threshold", "consecutive_steps"}, "escape");
    EscapePredicate e;
    if (j.contains("coordinate")) {
        e.coordinate = j.at("coordinate").get<int>();
    }
    if (j.contains("threshold")) {
        e.threshold = j.at("threshold").get<double>();
    }
    if (j.contains("consecutive_steps")) {
        e.consecutive_steps = j.at("consecutive_steps").get<int>();
    }
    return e;
}

} // namespace qpart::detail

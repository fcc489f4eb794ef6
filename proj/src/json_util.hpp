#pragma once

// JSON (de)serialization shared by the field container and the run
// configuration. Serialization is canonical: nlohmann::json orders object
// keys, and doubles print in shortest round-trip form, so dump() of equal
// documents is byte-equal.

#include <string>

#include <nlohmann/json.hpp>

#include "qpart/errors.hpp"
#include "qpart/partition.hpp"

namespace qpart::detail {

using nlohmann::json;

/// Rejects keys outside `allowed` — configuration typos are hard errors.
void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& where);

json axis_to_json(const AxisSpec& a);
AxisSpec axis_from_json(const json& j);

json domain_to_json(const ScanDomain& d);
ScanDomain domain_from_json(const json& j);

json integrator_config_to_json(const IntegratorConfig& c);
IntegratorConfig integrator_config_from_json(const json& j);

json escape_to_json(const EscapePredicate& e);
EscapePredicate escape_from_json(const json& j);

} // namespace qpart::detail

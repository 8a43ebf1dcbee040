#pragma once

// nlohmann/json conversions shared by io, whatif and service. Private to the
// core library.

#include "json.hpp"

#include "copath/io.hpp"
#include "copath/model.hpp"
#include "copath/whatif.hpp"

namespace copath::codec {

using nlohmann::json;

json instance_to_json(const Instance& instance);
Instance instance_from_json(const json& doc, const SeverityMap& severities = {});

json solution_to_json(const Instance& instance, const Solution& solution);
json solution_core_to_json(const Solution& solution);
Solution solution_from_json(const json& doc);

json node_records_to_json(const std::vector<NodeRecord>& records);

json delta_to_json(const WhatIfDelta& delta);
WhatIfDelta delta_from_json(const json& doc);
json diff_to_json(const SolutionDiff& diff);
SolutionDiff diff_from_json(const json& doc);

/// Parses text, turning library exceptions into ParseError.
json parse(const std::string& text, const std::string& what);

}  // namespace copath::codec

// Copyright (c) tcwta contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>
#include <string>

#include "tcwta/tcw.hpp"

namespace tcwta {

using json = nlohmann::json;

json interval_to_json(const Interval& iv); // {"lo":..,"up":..|"inf"}
Interval interval_from_json(const json& j, const char* lo_key = "lo", const char* up_key = "up");
json owner_to_json(const Owner& o);
Owner owner_from_json(const json& j);

json stcw_to_json(const SplitStcw& w);
json stcw_to_json(const Stcw& w);
// Parses and validates; throws Error{ModelError} on format problems.
SplitStcw stcw_from_json(const json& j);

json timestamps_to_json(const TimestampMap& ts);
json unrealizable_to_json(const Stcw& w, const Unrealizable& u);
json partition_to_json(const RoundPartition& p);

// Graphviz rendering: solid succ, dashed holes, curved labelled constraints.
std::string stcw_to_dot(const SplitStcw& w, const std::string& name = "stcw");

} // namespace tcwta

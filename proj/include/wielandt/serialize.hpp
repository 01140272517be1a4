#pragma once

// JSON exchange formats: matrices {"rows", "cols", "re", "im"} (row-major),
// maps as a tagged union on "type", instances, check reports and search
// results. Doubles are written in shortest round-trip form, so a dump and
// reload reproduces every bit.

#include <json.hpp>

#include <string>

#include "wielandt/search.hpp"

namespace wielandt {

using json = nlohmann::json;

json matrix_to_json(const CMatrix& x);
CMatrix matrix_from_json(const json& j);

json map_to_json(const PositiveMap& phi);
PositiveMap map_from_json(const json& j);

json instance_to_json(const Instance& inst);
Instance instance_from_json(const json& j);

json report_to_json(const CheckReport& r);

json config_to_json(const SearchConfig& cfg);
json search_to_json(const SearchRecord& rec, const SearchConfig& cfg);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace wielandt

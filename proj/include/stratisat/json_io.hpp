#ifndef STRATISAT_JSON_IO_HPP
#define STRATISAT_JSON_IO_HPP

#include <json.hpp>

#include "stratisat/interpretation.hpp"
#include "stratisat/normalize.hpp"
#include "stratisat/relativize.hpp"
#include "stratisat/solver.hpp"

namespace stratisat {

// {"m": int, "sort0": {var: int}, "sort1": {var: [int]}, "sort2": {var: [[int]]}}
// with subsets listed ascending and collections ordered by subset encoding.
nlohmann::json model_to_json(const Interpretation& M);
Interpretation model_from_json(const nlohmann::json& j);

nlohmann::json result_to_json(const SatResult& r);
nlohmann::json fragment_report_to_json(const FragmentReport& r);
nlohmann::json universe_report_to_json(const UniverseReport& r);

} // namespace stratisat

#endif

#pragma once

#include <string>

#include "json.hpp"

#include "ehencky/convexity.hpp"
#include "ehencky/elastostatics.hpp"

namespace ehencky {

/// {"suite", "samples", "worst_margin", "tolerance", "passed", "seed", "witness": {name: [values]}}.
/// Matrices in the witness are row-major arrays of four numbers. A non-finite margin is null.
nlohmann::ordered_json to_json(const ScanReport& r);

/// Inverse of to_json (ignores "passed").
ScanReport scan_report_from_json(const nlohmann::ordered_json& j);

/// {"status", "final_energy", "initial_energy", "iterations", "gradient_norm", "min_element_det"}.
nlohmann::ordered_json to_json(const SolveResult& r);

}  // namespace ehencky

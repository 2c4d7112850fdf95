#pragma once

#include <string>

#include <json.hpp>

#include "mmot/certificate.hpp"
#include "mmot/cost.hpp"
#include "mmot/measure.hpp"
#include "mmot/plan.hpp"
#include "mmot/solver.hpp"

namespace mmot {

nlohmann::json measure_to_json(const DiscreteMeasure& mu);
// Rejects payloads whose weights do not sum to 1 within 1e-9.
DiscreteMeasure measure_from_json(const nlohmann::json& j);

nlohmann::json plan_to_json(const SparsePlan& plan);
SparsePlan plan_from_json(const nlohmann::json& j);

nlohmann::json certificate_to_json(const Certificate& cert);
nlohmann::json solve_report_to_json(const SolveReport& report);

// Rows: i_1..i_N, the flattened coordinates, mass. Header included.
std::string plan_to_csv(const SparsePlan& plan);

CostKind cost_kind_from_name(const std::string& name);
std::string cost_kind_name(CostKind kind);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

// FNV-1a hash of a byte string, as a hex literal; used to stamp input files
// into experiment reports.
std::string content_hash(const std::string& bytes);

}  // namespace mmot

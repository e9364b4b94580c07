#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "sfols/eval.hpp"
#include "sfols/run_result.hpp"

namespace sfols {

// Shortest round-trip decimal form (to_chars); "inf"/"nan" spelled out.
std::string format_double(double v);

nlohmann::json momdp_to_json(const TabularMOMDP& m);
// Validates the reconstructed model.
TabularMOMDP momdp_from_json(const nlohmann::json& j);

/**
 * SF-set dump: one object per entry with source_weight, expected_sf,
 * solver_tag, and (unless disabled) the full per-(s,a) SF table, which is
 * what lets a later process rebuild GPI policies without re-planning.
 */
nlohmann::json sf_set_to_json(const SFSet& set, bool include_tables = true);

/**
 * Rebuilds the set against a model. Entries carrying a table get their
 * policy re-derived greedily from it under the source weight; entries
 * without one are re-solved exactly for their source weight (planner mode)
 * and their expected SF recomputed. Duplicate expected SFs (possible only
 * on the re-solve path) are skipped.
 */
SFSet sf_set_from_json(const nlohmann::json& j, const TabularMOMDP& m,
                       double tol = 1e-8);

// d fixes the weight-column count even when there are no data rows.
void write_iterations_csv(const std::string& path, const RunResult& res,
                          std::uint64_t seed, int d);
void write_eval_csv(const std::string& path, const EvaluationReport& rep,
                    std::uint64_t seed, int d);
void write_lifelong_csv(const std::string& path,
                        const std::vector<LifelongPhase>& trace,
                        std::uint64_t seed, int d);

} // namespace sfols

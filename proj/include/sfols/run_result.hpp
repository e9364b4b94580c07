#pragma once

#include <string>
#include <vector>

#include "sfols/gpi.hpp"

namespace sfols {

/**
 * One row of the per-task log shared by every set-building algorithm.
 * The scalar metric columns land in iterations.csv; the vector snapshots
 * (corner pushes, queue contents, current expected SFs) stay in memory for
 * geometry checks and are cheap at tabular scale.
 */
struct IterationRow {
    int iteration = 0; // 1-based solved-task counter
    Vector solved_weight;
    double popped_priority = 0.0; // +inf for the simplex extrema
    bool inserted = false;        // false when the SF was a duplicate
    int psi_size = 0;             // |set| after this task
    double mean_v_smp = 0.0;      // NaN when metric weights are disabled
    double mean_v_gpi = 0.0;      // NaN when metric weights are disabled
    double hypervolume = 0.0;
    double max_queue_priority = 0.0; // after pushes; -inf when queue empty

    std::vector<Vector> corners_generated; // created this iteration, queued
                                           // only above the stop threshold
    std::vector<double> corner_priorities; // matching improvement estimates
    std::vector<Vector> queue_after;       // queued weights after pushes
    std::vector<Vector> psi_snapshot;      // expected SFs after this task
};

struct RunResult {
    std::string algorithm; // "sfols" | "wcpi" | "sip" | "random_weights"
    SFSet set;
    std::vector<Vector> solved_weights; // task order, duplicates included
    std::vector<IterationRow> iterations;
    int corners_generated_total = 0;
};

} // namespace sfols

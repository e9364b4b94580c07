#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "sfols/run_result.hpp"

namespace sfols {

// n seeded draws from the flat Dirichlet over the d-simplex.
std::vector<WeightVector> sample_simplex_weights(int n, int d,
                                                 std::uint64_t seed);

struct EvalRow {
    Vector w;
    double v_smp;  // max_i psi_i . w
    double v_gpi;  // exact value of the GPI policy
    double v_star; // optimal value (value iteration)
    double gap_smp;
    double gap_gpi;
};

struct EvaluationReport {
    std::vector<EvalRow> rows;
    double mean_v_smp = 0.0;
    double mean_v_gpi = 0.0;
    double mean_v_star = 0.0;
    double max_gap_smp = 0.0;
    double max_gap_gpi = 0.0;
    // Metadata, filled by the caller where applicable.
    double hv = std::numeric_limits<double>::quiet_NaN();
    int psi_size = 0;
    int iteration = -1;
    std::uint64_t seed = 0;
};

/**
 * Zero-shot transfer report over a list of test weights. For every weight
 * it records the set-max value, the exact value of the GPI policy, and the
 * optimal value, together with both optimality gaps.
 */
EvaluationReport evaluate_policy_set(const TabularMOMDP& m, const SFSet& set,
                                     const std::vector<WeightVector>& weights,
                                     double tol = 1e-8);

/**
 * Fills the metric columns of a per-task log row: hypervolume of the
 * current expected SFs over hv_ref, and, when metric_weights is nonempty,
 * the mean set-max and mean exact GPI values over those weights (NaN
 * otherwise).
 */
void fill_iteration_metrics(IterationRow& row, const TabularMOMDP& m,
                            const SFSet& set,
                            const std::vector<WeightVector>& metric_weights,
                            const Vector& hv_ref, double tol = 1e-8);

/**
 * Hypervolume of the union of boxes [ref, p] over the given points. Points
 * with any component at or below the reference are clipped away. Exact for
 * up to three dimensions (sweep, then slicing); higher dimensions fall back
 * to seeded Monte Carlo, whose standard error is written to std_error when
 * provided (0 for the exact paths).
 */
double hypervolume(const std::vector<Vector>& points, const Vector& ref,
                   std::uint64_t mc_seed = 2026, long mc_samples = 200000,
                   double* std_error = nullptr);

// Weight grid with a known covering radius (every simplex point lies within
// this Euclidean distance of some grid point).
struct WeightGrid {
    std::vector<WeightVector> points;
    double covering_radius = 0.0;
};

// Evenly spaced grid on the 2-simplex: n points from (1,0) to (0,1).
WeightGrid uniform_weight_grid_2d(int n);

struct TransferBoundReport {
    double observed_gap = 0.0; // max over test weights of v* - v_gpi
    double bound = 0.0;        // 2 phi_max / (1-gamma) * (maxmin + radius)
    double phi_max = 0.0;
    double grid_maxmin = 0.0;  // max_w min_i ||w - w_i|| over the grid
    bool within_bound = false;
};

/**
 * Checks the transfer-suboptimality bound: the worst GPI gap over the test
 * weights must not exceed 2 phi_max / (1 - gamma) times the largest
 * distance from any weight to its nearest solved task. The max-min distance
 * is estimated on the grid and inflated by the grid's covering radius so
 * the comparison is against a true upper bound.
 *
 * All entries must carry exact optimal policies of their source weights
 * (planner solver); otherwise PreconditionError.
 */
TransferBoundReport transfer_bound_audit(const TabularMOMDP& m, const SFSet& set,
                              const std::vector<WeightVector>& test_weights,
                              const WeightGrid& grid, double tol = 1e-8);

struct LifelongPhase {
    int phase = 0;
    Vector weight;
    double mean_return = 0.0; // discounted episodic return, averaged
    double std_error = 0.0;
    double v_gpi = 0.0; // exact value for comparison
    long episodes = 0;
    long steps = 0;
};

/**
 * Zero-shot lifelong protocol: each phase samples a fresh task weight,
 * freezes the GPI policy for it, and rolls episodes until the step budget
 * is spent. Returns per-phase discounted-return statistics next to the
 * exact policy value. No learning happens during evaluation.
 */
std::vector<LifelongPhase> lifelong_eval(const TabularMOMDP& m,
                                         const SFSet& set, int num_phases,
                                         long steps_per_phase,
                                         std::uint64_t seed,
                                         double tol = 1e-8);

struct VertexCheckReport {
    bool matched = false;
    int num_policies = 0;       // deterministic policies enumerated
    int num_distinct_srs = 0;   // after deduplication
    int oracle_vertices = 0;    // vertices of the enumerated SR polytope
    int discovered_vertices = 0;
    double max_deviation = 0.0; // worst matched sup-norm distance
};

/**
 * Successor-representation vertex discovery check. Takes a continuing MDP
 * already wrapped with one-hot features and the finished run of the
 * optimistic-linear-support loop on it (planner mode). Enumerates all
 * deterministic policies, evaluates each SR by a direct linear solve, and
 * compares vertices against the discovered set. Because every SR in a
 * continuing MDP has the same component sum, all points tie at the uniform
 * weight; comparing unique-maximizer vertices on both sides removes that
 * degeneracy.
 *
 * Requires num_actions^num_states <= 4096; larger models raise
 * PreconditionError.
 */
VertexCheckReport vertex_discovery_check(const TabularMOMDP& m,
                                         const RunResult& res);

} // namespace sfols

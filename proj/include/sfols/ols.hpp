#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sfols/run_result.hpp"
#include "sfols/solver.hpp"

namespace sfols {

struct QueueEntry {
    Vector w;
    double priority = 0.0;   // improvement estimate; +inf for extrema
    std::uint64_t order = 0; // insertion index, FIFO tie-break
};

/**
 * Max-priority queue over candidate weights with FIFO tie-breaking and
 * predicate removal. Sizes stay tiny (corner weights of the current
 * surface), so a linear scan beats a heap and keeps removal trivial.
 */
class WeightQueue {
  public:
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    void push(const Vector& w, double priority);
    QueueEntry pop_max();
    // -inf when empty.
    double max_priority() const;
    std::size_t remove_if(const std::function<bool(const QueueEntry&)>& pred);
    bool contains_close(const Vector& w, double tol) const;
    const std::vector<QueueEntry>& entries() const { return entries_; }

  private:
    std::vector<QueueEntry> entries_;
    std::uint64_t next_order_ = 0;
};

struct MetricConfig {
    int num_weights = 64; // 0 disables the mean-value columns
    std::uint64_t seed = 2026;
    std::optional<Vector> hv_ref; // hypervolume reference; default zeros(d)
};

struct SFOLSConfig {
    double epsilon = 0.0; // stop threshold; 0 runs until the queue empties
    int max_iterations = 1000;
    SolverConfig solver;
    std::uint64_t seed = 0;
    MetricConfig metrics;
};

// Raised when the iteration cap is hit; carries everything solved so far.
class IterationCapError : public std::runtime_error {
  public:
    IterationCapError(const std::string& msg, RunResult partial)
        : std::runtime_error(msg),
          partial_(std::make_shared<RunResult>(std::move(partial))) {}
    const RunResult& partial() const { return *partial_; }

  private:
    std::shared_ptr<RunResult> partial_;
};

/**
 * Corner weights created by inserting psi_new into the surface described by
 * set (pre-insertion). V_rel collects the vectors that attain the set max
 * at some removed weight, B_rel the simplex facets w_i = 0 touched by a
 * removed weight; every (d-1)-subset of V_rel union B_rel combined with the
 * normalization row gives one candidate linear system. Singular systems are
 * skipped, solutions outside the simplex (component < -1e-9) are dropped,
 * tiny negatives are clamped to zero, and anything within 1e-6 (sup-norm)
 * of known_weights or an earlier output is deduplicated away.
 *
 * w_deleted must contain w_solved; known_weights is typically the solved
 * list plus the current queue contents.
 */
std::vector<WeightVector> corner_weights(
    const Vector& psi_new, const Vector& w_solved, const SFSet& set,
    const std::vector<Vector>& w_deleted,
    const std::vector<Vector>& known_weights);

/**
 * Optimistic maximal improvement at w: solves
 *   max psi . w   s.t.  psi . w' <= max_i psi_i . w'  for all solved w',
 * with box bounds +-value_bound on psi, and returns the gap between that
 * upper bound and the current set max at w. Nonnegative up to LP tolerance.
 */
double estimate_improvement(const Vector& w, const SFSet& set,
                            const std::vector<Vector>& solved_weights,
                            double value_bound);

/**
 * The equivalent primal form: min sum_i alpha_i v_i subject to
 * sum_i alpha_i w_i = w, alpha >= 0, where v_i is solved weight i's set-max
 * value. Returns nullopt when w lies outside the cone of the solved
 * weights (infeasible). Used as a cross-check for estimate_improvement's
 * upper bound.
 */
std::optional<double> dual_upper_bound(const Vector& w,
                                       const std::vector<Vector>& solved_weights,
                                       const std::vector<double>& solved_values);

/**
 * Drops every queued weight whose value under psi_new strictly beats the
 * current set max there (1e-9 slack); returns the removed weights. An
 * empty set removes nothing (there is no surface to beat yet).
 */
std::vector<Vector> remove_dominated_queue_entries(WeightQueue& queue,
                                                   const Vector& psi_new,
                                                   const SFSet& set);

/**
 * Optimistic linear support over successor features. Seeds the queue with
 * the simplex extrema at infinite priority and repeatedly solves the
 * highest-priority weight, inserting each new expected SF and pushing the
 * corner weights it creates with their improvement estimates. Corners whose
 * estimate is at most epsilon are logged but never queued, so the loop
 * terminates exactly when no candidate can improve the surface by more
 * than epsilon.
 */
RunResult sfols_run(const TabularMOMDP& m, const SFOLSConfig& cfg);

} // namespace sfols

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sfols/momdp.hpp"
#include "sfols/planner.hpp"

namespace sfols {

// How an entry's policy was obtained.
enum class SolverTag { Planner, QLearning };

std::string to_string(SolverTag tag);
SolverTag solver_tag_from_string(const std::string& s);

// A policy together with its exact successor features.
struct PolicyEntry {
    Vector source_weight; // task the policy was trained on
    PolicyTable policy;
    SFTable sf_table;   // psi(s, a) for this policy
    Vector expected_sf; // psi under the initial distribution
    SolverTag tag = SolverTag::Planner;
};

// Two expected SFs closer than this (sup-norm) count as the same vector.
inline constexpr double kSFDedupTol = 1e-6;

/**
 * Ordered set of policy entries with pairwise distinct expected SFs.
 * Insertion order is preserved; ties in value queries break toward the
 * earliest entry.
 */
class SFSet {
public:
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    int dim() const { return empty() ? 0 : static_cast<int>(entries_[0].expected_sf.size()); }
    const std::vector<PolicyEntry>& entries() const { return entries_; }
    const PolicyEntry& operator[](std::size_t i) const { return entries_[i]; }

    bool contains(const Vector& psi, double tol = kSFDedupTol) const;

    // Throws PreconditionError when the entry duplicates an existing
    // expected SF within kSFDedupTol.
    void insert(PolicyEntry entry);

    std::vector<Vector> expected_sfs() const;

private:
    std::vector<PolicyEntry> entries_;
};

/**
 * Generalized policy improvement: the action maximizing psi_i(s, a) . w over
 * every entry i and action a. Ties break toward the lowest (entry index,
 * action index) pair.
 * \throws EmptySetError on an empty set
 */
int gpi_action(const SFSet& set, int s, const Vector& w);

// Set-max policy value: max_i psi_i . w over expected SFs, with the argmax
// index (earliest entry on ties).
std::pair<double, int> smp_value(const SFSet& set, const Vector& w);

// The deterministic stationary policy that takes the GPI action everywhere.
PolicyTable materialize_gpi_policy(const TabularMOMDP& m, const SFSet& set,
                                   const Vector& w);

// Exact value of the GPI policy for weight w under the initial
// distribution (scalar policy evaluation of the materialized policy).
double evaluate_gpi_policy(const TabularMOMDP& m, const SFSet& set,
                           const Vector& w, double tol = 1e-8);

/**
 * Expected SFs of the GPI policies induced by each weight, evaluated
 * exactly and deduplicated (sup-norm kSFDedupTol, first occurrence kept).
 * The result can contain vectors outside the set: GPI may stitch entries
 * into a policy none of them equals.
 */
std::vector<Vector> gpi_expanded_sfs(const TabularMOMDP& m, const SFSet& set,
                                     const std::vector<WeightVector>& weights,
                                     double tol = 1e-8);

/**
 * Indices of the vectors that attain max_i psi_i . w for at least one
 * simplex weight w (weak inequality: boundary-optimal vectors are kept).
 * Decided per vector by maximizing the worst advantage over the others with
 * an LP; vectors whose optimal advantage is >= -1e-9 stay.
 */
std::vector<int> ccs_prune_indices(const std::vector<Vector>& points);

/**
 * Indices of the vectors that are the *unique* maximizer at some simplex
 * weight: the vertices of the upper surface. Duplicates (within kSFDedupTol)
 * are skipped when testing uniqueness; a vector stays when its best worst
 * advantage exceeds strict_tol.
 */
std::vector<int> vertex_prune_indices(const std::vector<Vector>& points,
                                      double strict_tol = 1e-7);

// Restriction of the set to its CCS members.
SFSet prune_to_ccs(const SFSet& set);

} // namespace sfols

#pragma once

#include "sfols/gpi.hpp"
#include "sfols/qlearning.hpp"

namespace sfols {

// How single tasks are solved inside OLS and the baselines.
struct SolverConfig {
    enum class Type { Planner, QLearning };
    Type type = Type::Planner;
    double tol = 1e-8; // planner accuracy; also used for exact re-evaluation
    int max_sweeps = 100000;
    QLearnConfig qlearn;
};

/**
 * Solves the task w and packages the result. Planner mode runs value
 * iteration and evaluates the greedy policy's SFs exactly. Q-learning mode
 * trains a table (bootstrapping exploration on `current` via GPI), then
 * re-evaluates the greedy policy exactly as well, so approximation error
 * never enters the stored SF geometry; the tag still records how the policy
 * was found.
 */
PolicyEntry solve_task(const TabularMOMDP& m, const Vector& w,
                       const SolverConfig& solver, const SFSet& current,
                       std::uint64_t task_seed);

} // namespace sfols

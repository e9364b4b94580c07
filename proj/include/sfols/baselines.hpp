#pragma once

#include <cstdint>

#include "sfols/ols.hpp"

namespace sfols {

struct BaselineConfig {
    SolverConfig solver;
    std::uint64_t seed = 0;
    MetricConfig metrics;
};

/**
 * Worst-case policy iteration on the set-max value: the first task is a
 * random simplex weight; every following task is the minimizer of
 * max_i psi_i . w over the simplex (epigraph LP). Stops once solving the
 * chosen weight improves its set-max value by less than 1e-6, or after
 * max_iters tasks.
 */
RunResult wcpi_run(const TabularMOMDP& m, const BaselineConfig& cfg,
                   int max_iters);

/**
 * Set of independent policies: exactly d tasks, task i weighting feature i
 * by +1 and every other feature by -delta. These weights leave the simplex
 * by design.
 */
RunResult sip_run(const TabularMOMDP& m, const BaselineConfig& cfg,
                  double delta = 0.1);

// num_iters tasks at weights sampled uniformly from the simplex.
RunResult random_weights_run(const TabularMOMDP& m, const BaselineConfig& cfg,
                             int num_iters);

} // namespace sfols

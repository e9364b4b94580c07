#pragma once

#include <cstdint>

#include "sfols/gpi.hpp"
#include "sfols/momdp.hpp"

namespace sfols {

struct QLearnConfig {
    double alpha = 0.3;
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    long num_steps = 100000;
    long epsilon_decay_steps = 0; // 0: decay across num_steps
    int episode_cap = 1000;       // steps per episode before a reset
    std::uint64_t seed = 0;
};

struct QLearnResult {
    SFTable table;        // learned psi(s, a)
    PolicyTable greedy;   // argmax_a table(s, a) . w
    long episodes = 0;
};

/**
 * Tabular successor-feature Q-learning for the task w, bootstrapped from a
 * set of previously learned policies.
 *
 * The new table starts as a copy of the previous entry whose expected SF is
 * best for w (zeros when the set is empty). Behavior is epsilon-greedy
 * around the GPI action over all previous tables plus the one being
 * learned; epsilon decays linearly. The TD target also bootstraps on the
 * GPI action of the successor state:
 *
 *   a' = argmax_a max_i psi_i(s', a) . w
 *   delta = phi + gamma * psi(s', a') - psi(s, a)   (phi only, s' terminal)
 *
 * Episodes restart from the initial distribution on termination or after
 * episode_cap steps. One seeded RNG pair (exploration, environment) makes
 * runs reproducible.
 */
QLearnResult learn_sf_qlearning(const TabularMOMDP& m, const Vector& w,
                                const SFSet& previous,
                                const QLearnConfig& cfg);

} // namespace sfols

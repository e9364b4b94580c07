#pragma once

#include <cstdint>
#include <vector>

#include "sfols/errors.hpp"
#include "sfols/types.hpp"

namespace sfols {

// One possible result of taking an action: successor state, probability,
// and the feature vector of the (s, a, s') transition.
struct Outcome {
    int next = 0;
    double prob = 0.0;
    Vector phi;
};

/**
 * Finite MDP whose reward is vector-valued: taking action a in state s and
 * landing in s' emits features phi(s, a, s') in R^d. Scalar rewards arise by
 * weighting the features linearly.
 *
 * Transitions are stored per (s, a) as a list of outcomes covering the
 * support of p(.|s, a). Terminal states are absorbing and emit zero features
 * on their self-loops; planners stop bootstrapping once a successor is
 * terminal, so episodes end upon *entering* a terminal state.
 */
struct TabularMOMDP {
    int num_states = 0;
    int num_actions = 0;
    int d = 0; // feature dimension
    double gamma = 0.0;
    Vector initial_dist;                    // mu over states, sums to 1
    std::vector<std::uint8_t> terminal;     // per-state flag
    std::vector<std::vector<Outcome>> rows; // rows[s * num_actions + a]

    const std::vector<Outcome>& outcomes(int s, int a) const {
        return rows[static_cast<std::size_t>(s) * num_actions + a];
    }
    std::vector<Outcome>& outcomes(int s, int a) {
        return rows[static_cast<std::size_t>(s) * num_actions + a];
    }
    bool is_terminal(int s) const { return terminal[s] != 0; }
};

// Checks structural invariants: dimensions, gamma in [0,1), probability rows
// summing to one, mu summing to one, and the absorbing encoding of terminal
// states. Throws std::invalid_argument subtypes on violation.
void validate_momdp(const TabularMOMDP& m);

/**
 * Task weight on the probability simplex: components nonnegative and summing
 * to one (within 1e-9). Construction validates.
 */
class WeightVector {
public:
    explicit WeightVector(Vector w);
    const Vector& vec() const { return w_; }
    int size() const { return static_cast<int>(w_.size()); }
    double operator[](int i) const { return w_[i]; }

private:
    Vector w_;
};

// Arbitrary finite task weight; set-improving tasks leave the simplex.
class RawWeight {
public:
    explicit RawWeight(Vector w);
    const Vector& vec() const { return w_; }
    int size() const { return static_cast<int>(w_.size()); }

private:
    Vector w_;
};

/**
 * Validates that w lies on the probability simplex.
 * \throws NegativeComponentError if any component is below -1e-9
 * \throws SumNotOneError if the components do not sum to 1 within 1e-9
 */
WeightVector validate_weight(const Vector& w);

// Scalar reward of a transition: phi(s, a, s') . w. The successor must be on
// the support of p(.|s, a).
double scalarize_reward(const TabularMOMDP& m, const Vector& w, int s, int a,
                        int s_next);

/**
 * Rewraps an MDP so its features become indicators of the successor state
 * (d = num_states). A policy's expected SF is then its discounted successor
 * occupancy, counting visits from t = 1 onward (the occupancy of the start
 * state itself is not included; it would add a constant mu offset).
 * Terminal states keep their absorbing zero-feature encoding.
 */
TabularMOMDP one_hot_wrap(const TabularMOMDP& m);

// Largest Euclidean feature norm over all stored (s, a, s') transitions.
double feature_norm_max(const TabularMOMDP& m);

} // namespace sfols

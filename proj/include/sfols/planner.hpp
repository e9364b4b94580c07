#pragma once

#include "sfols/momdp.hpp"
#include "sfols/types.hpp"

namespace sfols {

// Per-policy successor-feature table: row (s * num_actions + a) holds
// psi(s, a) in R^d, the expected discounted feature sum after taking a in s
// and following the policy afterwards.
struct SFTable {
    int num_states = 0;
    int num_actions = 0;
    int d = 0;
    Matrix psi; // (num_states * num_actions) x d

    auto row(int s, int a) const {
        return psi.row(static_cast<Eigen::Index>(s) * num_actions + a);
    }
    auto row(int s, int a) {
        return psi.row(static_cast<Eigen::Index>(s) * num_actions + a);
    }
    bool empty() const { return num_states == 0; }
};

// Expected SF of a policy under the initial distribution.
using ExpectedSF = Vector;

struct ValueIterationResult {
    PolicyTable policy; // greedy w.r.t. the converged values
    Vector values;      // optimal state values for the scalarized reward
    Vector q;           // optimal action values, row-major (s * A + a)
    int sweeps = 0;
};

/**
 * Synchronous (Jacobi) value iteration for the scalarized reward phi . w.
 * Sweeps update every state from the previous iterate and stop once the
 * sup-norm change falls below tol * (1 - gamma) / (2 * gamma), which bounds
 * the value error by tol. Greedy ties break toward the lowest action index.
 *
 * \param w     linear task weight, any finite vector of length d
 * \param tol   accuracy of the returned values
 * \param warm  optional initial state values (speeds up weight sweeps)
 * \throws NonConvergenceError if max_sweeps is exhausted first
 */
ValueIterationResult value_iteration(const TabularMOMDP& m, const Vector& w,
                                     double tol = 1e-8,
                                     int max_sweeps = 100000,
                                     const Vector* warm = nullptr);

/**
 * Evaluates the vector-valued fixed point
 *   psi(s, a) = sum_s' p(s'|s,a) [ phi(s,a,s') + gamma 1{s' non-terminal}
 *                                  psi(s', pi(s')) ]
 * by synchronous sweeps, to componentwise accuracy tol.
 */
SFTable policy_sf_evaluation(const TabularMOMDP& m, const PolicyTable& pi,
                             double tol = 1e-8, int max_sweeps = 100000);

// sum_s mu(s) psi(s, pi(s))
ExpectedSF expected_sf(const TabularMOMDP& m, const SFTable& table,
                       const PolicyTable& pi);

// Scalar policy evaluation under the initial distribution: the value of
// following pi when rewards are phi . w.
double policy_value(const TabularMOMDP& m, const PolicyTable& pi,
                    const Vector& w, double tol = 1e-8,
                    int max_sweeps = 100000);

} // namespace sfols

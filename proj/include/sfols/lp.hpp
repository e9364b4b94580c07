#pragma once

#include <optional>

#include "sfols/types.hpp"

namespace sfols {

/**
 * Linear program in inequality form:
 *
 *     maximize    c . x
 *     subject to  A x <= b
 *                 lo <= x <= hi   (componentwise; +-inf allowed)
 *
 * Equality constraints are expressed as paired inequalities by callers.
 */
struct LinearProgram {
    Vector c;
    Matrix A; // may have zero rows (pure box problem)
    Vector b;
    Vector lo;
    Vector hi;
};

struct LPResult {
    enum class Status { Optimal, Infeasible, Unbounded };
    Status status = Status::Infeasible;
    Vector x;               // populated when Optimal
    double objective = 0.0; // c . x at the optimum
};

/**
 * Solves the LP with a primal simplex method that handles variable bounds
 * directly (nonbasic variables rest at either bound; bound flips are cheap
 * pivots). Bland's rule picks entering and leaving variables, so the method
 * cannot cycle. A two-phase scheme with artificial variables establishes
 * feasibility first.
 *
 * The objective of an Optimal result is accurate to 1e-7 and the returned
 * point satisfies all constraints to the same tolerance.
 */
LPResult solve_lp(const LinearProgram& lp);

/**
 * Solves the square system M x = b by Gaussian elimination with partial
 * pivoting. Returns nullopt when the matrix is numerically singular
 * (some pivot below 1e-10 in magnitude).
 */
std::optional<Vector> solve_linear_system(Matrix M, Vector b);

} // namespace sfols

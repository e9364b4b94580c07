#include "sfols/lp.hpp"

#include <cmath>
#include <cstdint>

#include "sfols/errors.hpp"

namespace sfols {

namespace {

constexpr double kEps = 1e-9;      // reduced-cost / ratio eligibility
constexpr double kFeasTol = 1e-7;  // final feasibility certificate
constexpr int kMaxPivots = 200000; // tripwire; Bland's rule terminates anyway

// Simplex working state after conversion to the computational form
//   maximize obj . y,  T y = rhs0,  0 <= y_j <= ub_j,
// where T includes structural, slack and artificial columns.
struct Tableau {
    int m = 0;
    int n = 0;
    Matrix tab;               // m x n, kept equal to B^-1 * T by pivoting
    Vector xb;                // current values of the basic variables
    std::vector<double> ub;   // upper bounds (lower bounds are all zero)
    std::vector<int> basis;   // basis[i] = column basic in row i
    std::vector<char> basic;  // per-column flag
    std::vector<char> upper;  // nonbasic-at-upper flag
    std::vector<char> frozen; // column may not enter (artificials, phase 2)

    double nb_val(int j) const { return upper[j] ? ub[j] : 0.0; }
};

enum class StepOutcome { Optimal, Unbounded, Pivoted };

// One Bland-rule simplex step for the given objective.
StepOutcome simplex_step(Tableau& t, const Vector& obj) {
    // y = c_B, reduced cost r_j = obj_j - y . tab_col_j
    Vector y(t.m);
    for (int i = 0; i < t.m; ++i) y[i] = obj[t.basis[i]];

    int enter = -1;
    double dir = 1.0;
    for (int j = 0; j < t.n; ++j) {
        if (t.basic[j] || t.frozen[j]) continue;
        double r = obj[j];
        for (int i = 0; i < t.m; ++i) r -= y[i] * t.tab(i, j);
        if (!t.upper[j] && r > kEps) {
            enter = j;
            dir = 1.0;
            break; // Bland: first eligible index
        }
        if (t.upper[j] && r < -kEps) {
            enter = j;
            dir = -1.0;
            break;
        }
    }
    if (enter < 0) return StepOutcome::Optimal;

    // Ratio test: how far can the entering variable move off its bound?
    double t_best = std::isfinite(t.ub[enter]) ? t.ub[enter] : kInf;
    int leave_row = -1;       // -1 means the entering variable flips bound
    bool leave_at_upper = false;
    for (int i = 0; i < t.m; ++i) {
        const double coef = dir * t.tab(i, enter);
        double ratio = kInf;
        bool hits_upper = false;
        if (coef > kEps) {
            ratio = std::max(0.0, t.xb[i]) / coef; // basic drops to 0
        } else if (coef < -kEps) {
            const double ubi = t.ub[t.basis[i]];
            if (std::isfinite(ubi)) {
                ratio = std::max(0.0, ubi - t.xb[i]) / (-coef);
                hits_upper = true;
            }
        } else {
            continue;
        }
        // Bland tie-break: among all blocking variables attaining the
        // minimum (including the entering variable's own bound flip),
        // prefer the smallest variable index.
        const int blocking = (leave_row >= 0) ? t.basis[leave_row] : enter;
        if (ratio < t_best || (ratio == t_best && t.basis[i] < blocking)) {
            t_best = ratio;
            leave_row = i;
            leave_at_upper = hits_upper;
        }
    }

    if (!std::isfinite(t_best)) return StepOutcome::Unbounded;

    if (leave_row < 0) {
        // Entering variable runs to its other bound: flip, no basis change.
        for (int i = 0; i < t.m; ++i)
            t.xb[i] -= dir * t_best * t.tab(i, enter);
        t.upper[enter] = !t.upper[enter];
        return StepOutcome::Pivoted;
    }

    const int leave = t.basis[leave_row];
    for (int i = 0; i < t.m; ++i) {
        if (i == leave_row) continue;
        t.xb[i] -= dir * t_best * t.tab(i, enter);
    }
    t.xb[leave_row] = t.nb_val(enter) + dir * t_best;

    const double pivot = t.tab(leave_row, enter);
    t.tab.row(leave_row) /= pivot;
    for (int i = 0; i < t.m; ++i) {
        if (i == leave_row) continue;
        const double f = t.tab(i, enter);
        if (f != 0.0) t.tab.row(i) -= f * t.tab.row(leave_row);
    }

    t.basic[leave] = 0;
    t.upper[leave] = leave_at_upper;
    t.basic[enter] = 1;
    t.upper[enter] = 0;
    t.basis[leave_row] = enter;
    return StepOutcome::Pivoted;
}

// Runs simplex steps until optimality or unboundedness.
StepOutcome run_simplex(Tableau& t, const Vector& obj) {
    for (int k = 0; k < kMaxPivots; ++k) {
        StepOutcome s = simplex_step(t, obj);
        if (s != StepOutcome::Pivoted) return s;
    }
    throw NumericalError("solve_lp: pivot limit exceeded");
}

} // namespace

LPResult solve_lp(const LinearProgram& lp) {
    const int nx = static_cast<int>(lp.c.size());
    const int m = static_cast<int>(lp.b.size());
    if (lp.A.rows() != m || (m > 0 && lp.A.cols() != nx) ||
        lp.lo.size() != nx || lp.hi.size() != nx)
        throw DimensionMismatchError("solve_lp: inconsistent dimensions");

    LPResult res;
    for (int j = 0; j < nx; ++j) {
        if (lp.lo[j] > lp.hi[j]) return res; // Infeasible
    }

    // Substitute every variable so its lower bound becomes 0:
    //   finite lo:            x = lo + y,   y in [0, hi - lo]
    //   lo = -inf, finite hi: x = hi - y,   y in [0, inf)
    //   free:                 x = y+ - y-
    // cols[j] lists the resulting columns as (index, sign, offset).
    struct Piece {
        int col;
        double sign;
        double offset;
    };
    std::vector<std::vector<Piece>> pieces(nx);
    std::vector<double> ub;
    int ny = 0;
    for (int j = 0; j < nx; ++j) {
        if (std::isfinite(lp.lo[j])) {
            pieces[j].push_back({ny++, 1.0, lp.lo[j]});
            ub.push_back(std::isfinite(lp.hi[j]) ? lp.hi[j] - lp.lo[j] : kInf);
        } else if (std::isfinite(lp.hi[j])) {
            pieces[j].push_back({ny++, -1.0, lp.hi[j]});
            ub.push_back(kInf);
        } else {
            pieces[j].push_back({ny++, 1.0, 0.0});
            ub.push_back(kInf);
            pieces[j].push_back({ny++, -1.0, 0.0});
            ub.push_back(kInf);
        }
    }

    // Shifted right-hand side, structural part of the tableau and objective.
    Vector b2 = lp.b;
    Matrix body = Matrix::Zero(m, ny);
    Vector obj_struct = Vector::Zero(ny);
    for (int j = 0; j < nx; ++j) {
        for (const Piece& p : pieces[j]) {
            obj_struct[p.col] += lp.c[j] * p.sign;
            for (int i = 0; i < m; ++i) body(i, p.col) += lp.A(i, j) * p.sign;
        }
        if (pieces[j][0].offset != 0.0) {
            for (int i = 0; i < m; ++i)
                b2[i] -= lp.A(i, j) * pieces[j][0].offset;
        }
    }

    int n_art = 0;
    for (int i = 0; i < m; ++i)
        if (b2[i] < 0.0) ++n_art;

    Tableau t;
    t.m = m;
    t.n = ny + m + n_art;
    t.tab = Matrix::Zero(m, t.n);
    t.xb = Vector::Zero(m);
    t.ub = ub;
    t.ub.resize(t.n, kInf);
    t.basic.assign(t.n, 0);
    t.upper.assign(t.n, 0);
    t.frozen.assign(t.n, 0);
    t.basis.resize(m);

    // Slack columns; rows with negative rhs are negated and get an
    // artificial basic variable instead of their slack.
    int art = ny + m;
    for (int i = 0; i < m; ++i) {
        const double flip = (b2[i] < 0.0) ? -1.0 : 1.0;
        for (int j = 0; j < ny; ++j) t.tab(i, j) = flip * body(i, j);
        t.tab(i, ny + i) = flip; // slack
        if (flip < 0.0) {
            t.tab(i, art) = 1.0;
            t.basis[i] = art;
            t.basic[art] = 1;
            t.xb[i] = -b2[i];
            ++art;
        } else {
            t.basis[i] = ny + i;
            t.basic[ny + i] = 1;
            t.xb[i] = b2[i];
        }
    }

    if (n_art > 0) {
        Vector phase1 = Vector::Zero(t.n);
        for (int j = ny + m; j < t.n; ++j) phase1[j] = -1.0;
        StepOutcome s = run_simplex(t, phase1);
        if (s == StepOutcome::Unbounded)
            throw NumericalError("solve_lp: phase 1 unbounded");
        double infeas = 0.0;
        for (int i = 0; i < m; ++i)
            if (t.basis[i] >= ny + m) infeas += t.xb[i];
        for (int j = ny + m; j < t.n; ++j)
            if (!t.basic[j] && t.upper[j]) infeas += t.ub[j];
        if (infeas > kFeasTol) return res; // Infeasible
        // Pin artificials at zero and never let them re-enter.
        for (int j = ny + m; j < t.n; ++j) {
            t.ub[j] = 0.0;
            t.frozen[j] = 1;
            t.upper[j] = 0;
        }
    }

    Vector obj = Vector::Zero(t.n);
    obj.head(ny) = obj_struct;
    StepOutcome s = run_simplex(t, obj);
    if (s == StepOutcome::Unbounded) {
        res.status = LPResult::Status::Unbounded;
        return res;
    }

    // Recover y, then undo the substitutions.
    Vector yv = Vector::Zero(t.n);
    for (int j = 0; j < t.n; ++j)
        if (!t.basic[j]) yv[j] = t.nb_val(j);
    for (int i = 0; i < m; ++i) yv[t.basis[i]] = t.xb[i];

    Vector x(nx);
    for (int j = 0; j < nx; ++j) {
        double v = pieces[j][0].offset;
        for (const Piece& p : pieces[j]) v += p.sign * yv[p.col];
        x[j] = v;
    }

    // Certify feasibility of the reconstructed point.
    const double scale = std::max(1.0, lp.b.size() > 0
                                           ? lp.b.cwiseAbs().maxCoeff()
                                           : 0.0);
    for (int i = 0; i < m; ++i) {
        if (lp.A.row(i).dot(x) > lp.b[i] + kFeasTol * scale)
            throw NumericalError("solve_lp: optimal point violates a row "
                                 "constraint");
    }
    for (int j = 0; j < nx; ++j) {
        const double bs = std::max({1.0,
                                    std::isfinite(lp.lo[j]) ? std::abs(lp.lo[j]) : 0.0,
                                    std::isfinite(lp.hi[j]) ? std::abs(lp.hi[j]) : 0.0});
        if (x[j] < lp.lo[j] - kFeasTol * bs || x[j] > lp.hi[j] + kFeasTol * bs)
            throw NumericalError("solve_lp: optimal point violates a bound");
    }

    res.status = LPResult::Status::Optimal;
    res.x = std::move(x);
    res.objective = lp.c.dot(res.x);
    return res;
}

std::optional<Vector> solve_linear_system(Matrix M, Vector b) {
    const int n = static_cast<int>(M.rows());
    if (M.cols() != n || b.size() != n)
        throw DimensionMismatchError("solve_linear_system: matrix must be "
                                     "square and match the rhs");

    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(M(i, k)) > std::abs(M(piv, k))) piv = i;
        if (std::abs(M(piv, k)) < 1e-10) return std::nullopt; // singular
        if (piv != k) {
            M.row(piv).swap(M.row(k));
            std::swap(b[piv], b[k]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = M(i, k) / M(k, k);
            if (f == 0.0) continue;
            M.row(i).tail(n - k) -= f * M.row(k).tail(n - k);
            b[i] -= f * b[k];
        }
    }
    Vector x(n);
    for (int i = n - 1; i >= 0; --i) {
        double acc = b[i];
        for (int j = i + 1; j < n; ++j) acc -= M(i, j) * x[j];
        x[i] = acc / M(i, i);
    }
    return x;
}

} // namespace sfols

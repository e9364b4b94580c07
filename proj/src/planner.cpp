#include "sfols/planner.hpp"

#include <cmath>
#include <string>

namespace sfols {

namespace {

// Sup-norm threshold on successive iterates that certifies value accuracy
// tol (standard contraction bound). gamma = 0 converges in one sweep.
double stop_threshold(double gamma, double tol) {
    if (gamma <= 0.0) return tol;
    return tol * (1.0 - gamma) / (2.0 * gamma);
}

void check_weight_dim(const TabularMOMDP& m, const Vector& w,
                      const char* where) {
    if (w.size() != m.d)
        throw DimensionMismatchError(std::string(where) +
                                     ": weight length does not match d");
    if (!w.allFinite())
        throw PreconditionError(std::string(where) + ": non-finite weight");
}

void check_policy(const TabularMOMDP& m, const PolicyTable& pi,
                  const char* where) {
    if (static_cast<int>(pi.size()) != m.num_states)
        throw DimensionMismatchError(std::string(where) +
                                     ": policy length does not match the "
                                     "state count");
    for (int a : pi)
        if (a < 0 || a >= m.num_actions)
            throw PreconditionError(std::string(where) +
                                    ": policy action out of range");
}

} // namespace

ValueIterationResult value_iteration(const TabularMOMDP& m, const Vector& w,
                                     double tol, int max_sweeps,
                                     const Vector* warm) {
    check_weight_dim(m, w, "value_iteration");
    const int S = m.num_states;
    const int A = m.num_actions;

    // Scalarized expected one-step rewards, fixed across sweeps.
    std::vector<double> reward(static_cast<std::size_t>(S) * A);
    for (std::size_t ra = 0; ra < reward.size(); ++ra) {
        double r = 0.0;
        for (const Outcome& o : m.rows[ra]) r += o.prob * o.phi.dot(w);
        reward[ra] = r;
    }

    const double thr = stop_threshold(m.gamma, tol);
    Vector v = Vector::Zero(S);
    if (warm != nullptr) {
        if (warm->size() != S)
            throw DimensionMismatchError("value_iteration: warm-start length "
                                         "does not match the state count");
        v = *warm;
    }
    Vector v_next(S);
    int sweeps = 0;
    for (; sweeps < max_sweeps; ++sweeps) {
        double diff = 0.0;
        for (int s = 0; s < S; ++s) {
            double best = -kInf;
            for (int a = 0; a < A; ++a) {
                const std::size_t ra = static_cast<std::size_t>(s) * A + a;
                double q = reward[ra];
                for (const Outcome& o : m.rows[ra])
                    if (!m.terminal[o.next])
                        q += m.gamma * o.prob * v[o.next];
                if (q > best) best = q;
            }
            v_next[s] = best;
            diff = std::max(diff, std::abs(best - v[s]));
        }
        v.swap(v_next);
        if (diff <= thr) break;
    }
    if (sweeps >= max_sweeps)
        throw NonConvergenceError("value_iteration: no convergence within " +
                                  std::to_string(max_sweeps) + " sweeps");

    ValueIterationResult res;
    res.values = v;
    res.sweeps = sweeps + 1;
    res.policy.resize(S, 0);
    res.q.resize(static_cast<Eigen::Index>(S) * A);
    for (int s = 0; s < S; ++s) {
        double best = -kInf;
        int best_a = 0;
        for (int a = 0; a < A; ++a) {
            const std::size_t ra = static_cast<std::size_t>(s) * A + a;
            double q = reward[ra];
            for (const Outcome& o : m.rows[ra])
                if (!m.terminal[o.next]) q += m.gamma * o.prob * v[o.next];
            res.q[static_cast<Eigen::Index>(ra)] = q;
            if (q > best) { // strict: ties keep the lowest action index
                best = q;
                best_a = a;
            }
        }
        res.policy[s] = best_a;
    }
    return res;
}

SFTable policy_sf_evaluation(const TabularMOMDP& m, const PolicyTable& pi,
                             double tol, int max_sweeps) {
    check_policy(m, pi, "policy_sf_evaluation");
    const int S = m.num_states;
    const int A = m.num_actions;

    SFTable table;
    table.num_states = S;
    table.num_actions = A;
    table.d = m.d;
    table.psi = Matrix::Zero(static_cast<Eigen::Index>(S) * A, m.d);

    Matrix next = table.psi;
    const double thr = stop_threshold(m.gamma, tol);
    int sweeps = 0;
    for (; sweeps < max_sweeps; ++sweeps) {
        double diff = 0.0;
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                const std::size_t ra = static_cast<std::size_t>(s) * A + a;
                auto acc = next.row(ra);
                acc.setZero();
                for (const Outcome& o : m.rows[ra]) {
                    acc += o.prob * o.phi.transpose();
                    if (!m.terminal[o.next])
                        acc += (m.gamma * o.prob) *
                               table.psi.row(
                                   static_cast<Eigen::Index>(o.next) * A +
                                   pi[o.next]);
                }
                diff = std::max(
                    diff, (acc - table.psi.row(ra)).cwiseAbs().maxCoeff());
            }
        }
        table.psi.swap(next);
        if (diff <= thr) break;
    }
    if (sweeps >= max_sweeps)
        throw NonConvergenceError("policy_sf_evaluation: no convergence "
                                  "within " +
                                  std::to_string(max_sweeps) + " sweeps");
    return table;
}

ExpectedSF expected_sf(const TabularMOMDP& m, const SFTable& table,
                       const PolicyTable& pi) {
    check_policy(m, pi, "expected_sf");
    if (table.num_states != m.num_states || table.num_actions != m.num_actions ||
        table.d != m.d)
        throw DimensionMismatchError("expected_sf: table shape does not "
                                     "match the MOMDP");
    Vector out = Vector::Zero(m.d);
    for (int s = 0; s < m.num_states; ++s) {
        const double mu = m.initial_dist[s];
        if (mu != 0.0) out += mu * table.row(s, pi[s]).transpose();
    }
    return out;
}

double policy_value(const TabularMOMDP& m, const PolicyTable& pi,
                    const Vector& w, double tol, int max_sweeps) {
    check_policy(m, pi, "policy_value");
    check_weight_dim(m, w, "policy_value");
    const int S = m.num_states;

    std::vector<double> reward(S);
    for (int s = 0; s < S; ++s) {
        double r = 0.0;
        for (const Outcome& o : m.outcomes(s, pi[s])) r += o.prob * o.phi.dot(w);
        reward[s] = r;
    }

    const double thr = stop_threshold(m.gamma, tol);
    Vector v = Vector::Zero(S);
    Vector v_next(S);
    int sweeps = 0;
    for (; sweeps < max_sweeps; ++sweeps) {
        double diff = 0.0;
        for (int s = 0; s < S; ++s) {
            double acc = reward[s];
            for (const Outcome& o : m.outcomes(s, pi[s]))
                if (!m.terminal[o.next]) acc += m.gamma * o.prob * v[o.next];
            v_next[s] = acc;
            diff = std::max(diff, std::abs(acc - v[s]));
        }
        v.swap(v_next);
        if (diff <= thr) break;
    }
    if (sweeps >= max_sweeps)
        throw NonConvergenceError("policy_value: no convergence within " +
                                  std::to_string(max_sweeps) + " sweeps");
    return m.initial_dist.dot(v);
}

} // namespace sfols

#include "sfols/gpi.hpp"

#include <cmath>

#include "sfols/lp.hpp"

namespace sfols {

std::string to_string(SolverTag tag) {
    return tag == SolverTag::Planner ? "planner" : "qlearning";
}

SolverTag solver_tag_from_string(const std::string& s) {
    if (s == "planner") return SolverTag::Planner;
    if (s == "qlearning") return SolverTag::QLearning;
    throw PreconditionError("unknown solver tag: " + s);
}

bool SFSet::contains(const Vector& psi, double tol) const {
    for (const auto& e : entries_) {
        if (e.expected_sf.size() == psi.size() &&
            (e.expected_sf - psi).lpNorm<Eigen::Infinity>() <= tol)
            return true;
    }
    return false;
}

void SFSet::insert(PolicyEntry entry) {
    if (!entries_.empty() &&
        entry.expected_sf.size() != entries_[0].expected_sf.size())
        throw DimensionMismatchError("sf_set: mixed expected-SF dimensions");
    if (contains(entry.expected_sf))
        throw PreconditionError("sf_set: expected SF duplicates an existing "
                                "entry");
    entries_.push_back(std::move(entry));
}

std::vector<Vector> SFSet::expected_sfs() const {
    std::vector<Vector> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.expected_sf);
    return out;
}

int gpi_action(const SFSet& set, int s, const Vector& w) {
    if (set.empty()) throw EmptySetError("gpi_action: empty SF set");
    double best = -kInf;
    int best_a = 0;
    const int num_actions = set[0].sf_table.num_actions;
    for (const auto& e : set.entries()) {
        for (int a = 0; a < num_actions; ++a) {
            const double q = e.sf_table.row(s, a).dot(w);
            if (q > best) {
                best = q;
                best_a = a;
            }
        }
    }
    return best_a;
}

std::pair<double, int> smp_value(const SFSet& set, const Vector& w) {
    if (set.empty()) throw EmptySetError("smp_value: empty SF set");
    double best = -kInf;
    int best_i = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        const double v = set[i].expected_sf.dot(w);
        if (v > best) {
            best = v;
            best_i = static_cast<int>(i);
        }
    }
    return {best, best_i};
}

PolicyTable materialize_gpi_policy(const TabularMOMDP& m, const SFSet& set,
                                   const Vector& w) {
    PolicyTable pi(m.num_states);
    for (int s = 0; s < m.num_states; ++s) pi[s] = gpi_action(set, s, w);
    return pi;
}

double evaluate_gpi_policy(const TabularMOMDP& m, const SFSet& set,
                           const Vector& w, double tol) {
    return policy_value(m, materialize_gpi_policy(m, set, w), w, tol);
}

std::vector<Vector> gpi_expanded_sfs(const TabularMOMDP& m, const SFSet& set,
                                     const std::vector<WeightVector>& weights,
                                     double tol) {
    std::vector<Vector> out;
    for (const auto& w : weights) {
        PolicyTable pi = materialize_gpi_policy(m, set, w.vec());
        SFTable table = policy_sf_evaluation(m, pi, tol);
        Vector psi = expected_sf(m, table, pi);
        bool dup = false;
        for (const auto& seen : out) {
            if ((seen - psi).lpNorm<Eigen::Infinity>() <= kSFDedupTol) {
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(std::move(psi));
    }
    return out;
}

namespace {

// Best achievable worst-case advantage of points[i] over its rivals across
// the simplex: max_{w, t} t  s.t.  (psi_i - psi_j) . w >= t for all rivals.
double best_advantage(const std::vector<Vector>& points, int i,
                      bool skip_duplicates) {
    const int d = static_cast<int>(points[i].size());
    std::vector<int> rivals;
    double spread = 0.0;
    for (int j = 0; j < static_cast<int>(points.size()); ++j) {
        if (j == i) continue;
        const double dist =
            (points[i] - points[j]).lpNorm<Eigen::Infinity>();
        spread = std::max(spread, dist);
        if (skip_duplicates && dist <= kSFDedupTol) continue;
        rivals.push_back(j);
    }
    const double big = spread + 1.0;
    if (rivals.empty()) return big;

    const int rows = static_cast<int>(rivals.size()) + 2;
    LinearProgram lp;
    lp.c = Vector::Zero(d + 1);
    lp.c[d] = 1.0; // maximize the advantage t
    lp.A = Matrix::Zero(rows, d + 1);
    lp.b = Vector::Zero(rows);
    for (int r = 0; r < static_cast<int>(rivals.size()); ++r) {
        lp.A.row(r).head(d) = (points[rivals[r]] - points[i]).transpose();
        lp.A(r, d) = 1.0;
    }
    // sum w = 1 as a pair of inequalities
    lp.A.row(rows - 2).head(d).setConstant(1.0);
    lp.b[rows - 2] = 1.0;
    lp.A.row(rows - 1).head(d).setConstant(-1.0);
    lp.b[rows - 1] = -1.0;
    lp.lo = Vector::Zero(d + 1);
    lp.hi = Vector::Ones(d + 1);
    lp.lo[d] = -big;
    lp.hi[d] = big;

    LPResult res = solve_lp(lp);
    if (res.status != LPResult::Status::Optimal)
        throw NumericalError("ccs pruning: advantage LP not optimal");
    return res.objective;
}

} // namespace

std::vector<int> ccs_prune_indices(const std::vector<Vector>& points) {
    std::vector<int> kept;
    for (int i = 0; i < static_cast<int>(points.size()); ++i)
        if (best_advantage(points, i, false) >= -1e-9) kept.push_back(i);
    return kept;
}

std::vector<int> vertex_prune_indices(const std::vector<Vector>& points,
                                      double strict_tol) {
    std::vector<int> kept;
    for (int i = 0; i < static_cast<int>(points.size()); ++i)
        if (best_advantage(points, i, true) > strict_tol) kept.push_back(i);
    return kept;
}

SFSet prune_to_ccs(const SFSet& set) {
    SFSet out;
    for (int i : ccs_prune_indices(set.expected_sfs()))
        out.insert(set[static_cast<std::size_t>(i)]);
    return out;
}

} // namespace sfols

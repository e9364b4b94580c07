#include "sfols/ols.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sfols/eval.hpp"
#include "sfols/lp.hpp"
#include "sfols/rng.hpp"

namespace sfols {

void WeightQueue::push(const Vector& w, double priority) {
    entries_.push_back({w, priority, next_order_++});
}

QueueEntry WeightQueue::pop_max() {
    if (entries_.empty())
        throw PreconditionError("weight_queue: pop on an empty queue");
    std::size_t best = 0;
    for (std::size_t i = 1; i < entries_.size(); ++i) {
        if (entries_[i].priority > entries_[best].priority ||
            (entries_[i].priority == entries_[best].priority &&
             entries_[i].order < entries_[best].order))
            best = i;
    }
    QueueEntry out = std::move(entries_[best]);
    entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(best));
    return out;
}

double WeightQueue::max_priority() const {
    double best = -kInf;
    for (const QueueEntry& e : entries_) best = std::max(best, e.priority);
    return best;
}

std::size_t WeightQueue::remove_if(
    const std::function<bool(const QueueEntry&)>& pred) {
    const auto it = std::remove_if(entries_.begin(), entries_.end(), pred);
    const std::size_t removed =
        static_cast<std::size_t>(entries_.end() - it);
    entries_.erase(it, entries_.end());
    return removed;
}

bool WeightQueue::contains_close(const Vector& w, double tol) const {
    for (const QueueEntry& e : entries_)
        if (e.w.size() == w.size() &&
            (e.w - w).lpNorm<Eigen::Infinity>() <= tol)
            return true;
    return false;
}

namespace {

// One hyperplane of a corner system: either the surface of a value vector
// (relative to psi_new) or a simplex facet w_i = 0.
struct CornerConstraint {
    bool is_facet = false;
    int facet = 0;
    Vector psi;
};

bool close_to_any(const Vector& w, const std::vector<Vector>& pool,
                  double tol) {
    for (const Vector& p : pool)
        if (p.size() == w.size() && (p - w).lpNorm<Eigen::Infinity>() <= tol)
            return true;
    return false;
}

} // namespace

std::vector<WeightVector> corner_weights(
    const Vector& psi_new, const Vector& w_solved, const SFSet& set,
    const std::vector<Vector>& w_deleted,
    const std::vector<Vector>& known_weights) {
    const int d = static_cast<int>(psi_new.size());
    if (w_solved.size() != d)
        throw DimensionMismatchError("corner_weights: w_solved dimension");
    bool has_solved = false;
    for (const Vector& wd : w_deleted)
        if (wd.size() == d && (wd - w_solved).lpNorm<Eigen::Infinity>() <= 1e-12)
            has_solved = true;
    if (!has_solved)
        throw PreconditionError("corner_weights: w_deleted must contain "
                                "w_solved");

    std::vector<CornerConstraint> constraints;
    // V_rel: vectors attaining the set max at some deleted weight.
    for (std::size_t i = 0; i < set.size(); ++i) {
        const Vector& psi = set[i].expected_sf;
        bool relevant = false;
        for (const Vector& wd : w_deleted) {
            const double top = smp_value(set, wd).first;
            if (psi.dot(wd) >= top - 1e-9) {
                relevant = true;
                break;
            }
        }
        if (relevant) constraints.push_back({false, 0, psi});
    }
    // B_rel: simplex facets touched by a deleted weight.
    for (int i = 0; i < d; ++i) {
        bool touched = false;
        for (const Vector& wd : w_deleted)
            if (std::abs(wd[i]) <= 1e-9) {
                touched = true;
                break;
            }
        if (touched) constraints.push_back({true, i, Vector()});
    }

    std::vector<WeightVector> out;
    std::vector<Vector> emitted;
    const int n = static_cast<int>(constraints.size());
    const int k = d - 1;
    if (k > n) return out;

    std::vector<int> pick(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
    while (true) {
        Matrix sys = Matrix::Zero(d, d);
        Vector rhs = Vector::Zero(d);
        for (int r = 0; r < k; ++r) {
            const CornerConstraint& c =
                constraints[static_cast<std::size_t>(pick[static_cast<std::size_t>(r)])];
            if (c.is_facet)
                sys(r, c.facet) = 1.0;
            else
                sys.row(r) = (psi_new - c.psi).transpose();
        }
        sys.row(d - 1).setConstant(1.0);
        rhs[d - 1] = 1.0;

        if (auto x = solve_linear_system(sys, rhs)) {
            Vector w = std::move(*x);
            bool inside = true;
            for (int i = 0; i < d; ++i) {
                if (w[i] < -1e-9) {
                    inside = false;
                    break;
                }
                if (w[i] < 0.0) w[i] = 0.0;
            }
            if (inside) {
                w /= w.sum();
                if (!close_to_any(w, known_weights, 1e-6) &&
                    !close_to_any(w, emitted, 1e-6)) {
                    emitted.push_back(w);
                    out.emplace_back(w);
                }
            }
        }

        // next k-combination of {0..n-1}
        int pos = k - 1;
        while (pos >= 0 &&
               pick[static_cast<std::size_t>(pos)] == n - k + pos)
            --pos;
        if (pos < 0) break;
        ++pick[static_cast<std::size_t>(pos)];
        for (int i = pos + 1; i < k; ++i)
            pick[static_cast<std::size_t>(i)] =
                pick[static_cast<std::size_t>(i - 1)] + 1;
    }
    return out;
}

double estimate_improvement(const Vector& w, const SFSet& set,
                            const std::vector<Vector>& solved_weights,
                            double value_bound) {
    if (set.empty())
        throw EmptySetError("estimate_improvement: empty SF set");
    if (solved_weights.empty())
        throw PreconditionError("estimate_improvement: no solved weights");
    const int d = static_cast<int>(w.size());
    const int n = static_cast<int>(solved_weights.size());

    LinearProgram lp;
    lp.c = w;
    lp.A = Matrix::Zero(n, d);
    lp.b = Vector::Zero(n);
    for (int i = 0; i < n; ++i) {
        lp.A.row(i) = solved_weights[static_cast<std::size_t>(i)].transpose();
        lp.b[i] = smp_value(set, solved_weights[static_cast<std::size_t>(i)])
                      .first;
    }
    lp.lo = Vector::Constant(d, -value_bound);
    lp.hi = Vector::Constant(d, value_bound);

    const LPResult res = solve_lp(lp);
    if (res.status != LPResult::Status::Optimal)
        throw NumericalError("estimate_improvement: upper-bound LP did not "
                             "solve to optimality");
    return res.objective - smp_value(set, w).first;
}

std::optional<double> dual_upper_bound(
    const Vector& w, const std::vector<Vector>& solved_weights,
    const std::vector<double>& solved_values) {
    if (solved_weights.empty() ||
        solved_weights.size() != solved_values.size())
        throw PreconditionError("dual_upper_bound: needs matching nonempty "
                                "weights and values");
    const int d = static_cast<int>(w.size());
    const int n = static_cast<int>(solved_weights.size());

    // min sum alpha_i v_i  s.t.  sum alpha_i w_i = w, alpha >= 0,
    // phrased as a maximization with the equality split into two rows.
    LinearProgram lp;
    lp.c = Vector(n);
    for (int i = 0; i < n; ++i)
        lp.c[i] = -solved_values[static_cast<std::size_t>(i)];
    lp.A = Matrix::Zero(2 * d, n);
    lp.b = Vector::Zero(2 * d);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < n; ++i) {
            const double wij = solved_weights[static_cast<std::size_t>(i)][j];
            lp.A(j, i) = wij;
            lp.A(d + j, i) = -wij;
        }
        lp.b[j] = w[j];
        lp.b[d + j] = -w[j];
    }
    lp.lo = Vector::Zero(n);
    lp.hi = Vector::Constant(n, kInf);

    const LPResult res = solve_lp(lp);
    if (res.status == LPResult::Status::Infeasible) return std::nullopt;
    if (res.status != LPResult::Status::Optimal)
        throw NumericalError("dual_upper_bound: LP did not solve to "
                             "optimality");
    return -res.objective;
}

std::vector<Vector> remove_dominated_queue_entries(WeightQueue& queue,
                                                   const Vector& psi_new,
                                                   const SFSet& set) {
    if (set.empty()) return {};
    std::vector<Vector> removed;
    queue.remove_if([&](const QueueEntry& e) {
        if (psi_new.dot(e.w) > smp_value(set, e.w).first + 1e-9) {
            removed.push_back(e.w);
            return true;
        }
        return false;
    });
    return removed;
}

RunResult sfols_run(const TabularMOMDP& m, const SFOLSConfig& cfg) {
    if (cfg.epsilon < 0.0)
        throw PreconditionError("sfols_run: epsilon must be >= 0");
    if (cfg.max_iterations < 1)
        throw PreconditionError("sfols_run: max_iterations must be >= 1");
    const int d = m.d;
    const double value_bound = feature_norm_max(m) / (1.0 - m.gamma);

    const std::vector<WeightVector> metric_weights =
        sample_simplex_weights(cfg.metrics.num_weights, d, cfg.metrics.seed);
    const Vector hv_ref =
        cfg.metrics.hv_ref ? *cfg.metrics.hv_ref : Vector::Zero(d);
    if (hv_ref.size() != d)
        throw DimensionMismatchError("sfols_run: hv_ref dimension does not "
                                     "match d");

    RunResult result;
    result.algorithm = "sfols";

    WeightQueue queue;
    for (int i = 0; i < d; ++i) {
        Vector extremum = Vector::Zero(d);
        extremum[i] = 1.0;
        queue.push(extremum, kInf);
    }

    SFSet set;
    std::vector<Vector> w_exp;
    int iter = 0;
    while (!queue.empty() && queue.max_priority() > cfg.epsilon) {
        if (iter >= cfg.max_iterations) {
            RunResult partial = result;
            partial.set = set;
            throw IterationCapError(
                "sfols_run: iteration cap " +
                    std::to_string(cfg.max_iterations) +
                    " reached with a non-empty queue",
                std::move(partial));
        }
        const QueueEntry entry = queue.pop_max();
        ++iter;

        const std::uint64_t task_seed =
            mix64(cfg.seed ^ mix64(0x5f01u + static_cast<std::uint64_t>(iter)));
        PolicyEntry pe = solve_task(m, entry.w, cfg.solver, set, task_seed);
        w_exp.push_back(entry.w);
        result.solved_weights.push_back(entry.w);

        IterationRow row;
        row.iteration = iter;
        row.solved_weight = entry.w;
        row.popped_priority = entry.priority;

        if (!set.contains(pe.expected_sf)) {
            const Vector psi_new = pe.expected_sf;
            std::vector<Vector> w_del =
                remove_dominated_queue_entries(queue, psi_new, set);
            w_del.push_back(entry.w);

            std::vector<Vector> known = w_exp;
            for (const QueueEntry& qe : queue.entries())
                known.push_back(qe.w);
            const std::vector<WeightVector> corners =
                corner_weights(psi_new, entry.w, set, w_del, known);

            set.insert(std::move(pe));
            row.inserted = true;
            for (const WeightVector& c : corners) {
                const double delta =
                    estimate_improvement(c.vec(), set, w_exp, value_bound);
                row.corners_generated.push_back(c.vec());
                row.corner_priorities.push_back(delta);
                ++result.corners_generated_total;
                if (delta > cfg.epsilon) queue.push(c.vec(), delta);
            }
        }

        row.psi_size = static_cast<int>(set.size());
        fill_iteration_metrics(row, m, set, metric_weights, hv_ref,
                               cfg.solver.tol);
        row.max_queue_priority = queue.max_priority();
        for (const QueueEntry& qe : queue.entries())
            row.queue_after.push_back(qe.w);
        row.psi_snapshot = set.expected_sfs();
        result.iterations.push_back(std::move(row));
    }

    result.set = std::move(set);
    return result;
}

} // namespace sfols

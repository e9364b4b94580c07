#include "sfols/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "sfols/planner.hpp"
#include "sfols/rng.hpp"

namespace sfols {

namespace {

constexpr std::uint64_t kEvalStream = 0xe7a1;
constexpr std::uint64_t kLifelongStream = 0x11f0;
constexpr std::uint64_t kHvStream = 0x447;

// Area of the union of boxes [(rx,ry), p] for points strictly above the
// reference: sweep by descending x, accumulating strips of new height.
double hv2(std::vector<std::pair<double, double>> pts, double rx, double ry) {
    std::sort(pts.begin(), pts.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    double area = 0.0;
    double top = ry;
    for (const auto& [x, y] : pts) {
        if (y > top) {
            area += (x - rx) * (y - top);
            top = y;
        }
    }
    return area;
}

int sample_index(const Vector& dist, Rng& rng) {
    const double u = rng.uniform01();
    double cum = 0.0;
    for (int i = 0; i < dist.size(); ++i) {
        cum += dist[i];
        if (u < cum) return i;
    }
    return static_cast<int>(dist.size()) - 1;
}

const Outcome& sample_outcome(const std::vector<Outcome>& outs, Rng& rng) {
    const double u = rng.uniform01();
    double cum = 0.0;
    for (const Outcome& o : outs) {
        cum += o.prob;
        if (u < cum) return o;
    }
    return outs.back();
}

} // namespace

std::vector<WeightVector> sample_simplex_weights(int n, int d,
                                                 std::uint64_t seed) {
    if (n < 0 || d < 1)
        throw PreconditionError("sample_simplex_weights: need n >= 0, d >= 1");
    Rng rng(seed, kEvalStream);
    std::vector<WeightVector> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.emplace_back(rng.dirichlet_flat(d));
    return out;
}

EvaluationReport evaluate_policy_set(const TabularMOMDP& m, const SFSet& set,
                                     const std::vector<WeightVector>& weights,
                                     double tol) {
    if (set.empty()) throw EmptySetError("evaluate_policy_set: empty SF set");
    EvaluationReport rep;
    rep.psi_size = static_cast<int>(set.size());
    rep.rows.reserve(weights.size());
    for (const WeightVector& wv : weights) {
        EvalRow row;
        row.w = wv.vec();
        row.v_smp = smp_value(set, row.w).first;
        row.v_gpi = evaluate_gpi_policy(m, set, row.w, tol);
        const auto vi = value_iteration(m, row.w, tol);
        row.v_star = m.initial_dist.dot(vi.values);
        row.gap_smp = row.v_star - row.v_smp;
        row.gap_gpi = row.v_star - row.v_gpi;
        rep.rows.push_back(std::move(row));
    }
    if (!rep.rows.empty()) {
        for (const EvalRow& r : rep.rows) {
            rep.mean_v_smp += r.v_smp;
            rep.mean_v_gpi += r.v_gpi;
            rep.mean_v_star += r.v_star;
            rep.max_gap_smp = std::max(rep.max_gap_smp, r.gap_smp);
            rep.max_gap_gpi = std::max(rep.max_gap_gpi, r.gap_gpi);
        }
        const double n = static_cast<double>(rep.rows.size());
        rep.mean_v_smp /= n;
        rep.mean_v_gpi /= n;
        rep.mean_v_star /= n;
    }
    return rep;
}

void fill_iteration_metrics(IterationRow& row, const TabularMOMDP& m,
                            const SFSet& set,
                            const std::vector<WeightVector>& metric_weights,
                            const Vector& hv_ref, double tol) {
    row.hypervolume = hypervolume(set.expected_sfs(), hv_ref);
    if (metric_weights.empty()) {
        row.mean_v_smp = std::numeric_limits<double>::quiet_NaN();
        row.mean_v_gpi = std::numeric_limits<double>::quiet_NaN();
        return;
    }
    double sum_smp = 0.0;
    double sum_gpi = 0.0;
    for (const WeightVector& wv : metric_weights) {
        sum_smp += smp_value(set, wv.vec()).first;
        sum_gpi += evaluate_gpi_policy(m, set, wv.vec(), tol);
    }
    const double n = static_cast<double>(metric_weights.size());
    row.mean_v_smp = sum_smp / n;
    row.mean_v_gpi = sum_gpi / n;
}

double hypervolume(const std::vector<Vector>& points, const Vector& ref,
                   std::uint64_t mc_seed, long mc_samples,
                   double* std_error) {
    const int d = static_cast<int>(ref.size());
    if (d < 1) throw PreconditionError("hypervolume: empty reference point");
    for (const Vector& p : points)
        if (p.size() != d)
            throw DimensionMismatchError("hypervolume: point dimension does "
                                         "not match the reference");
    if (std_error != nullptr) *std_error = 0.0;

    std::vector<Vector> kept;
    for (const Vector& p : points)
        if ((p.array() > ref.array()).all()) kept.push_back(p);
    if (kept.empty()) return 0.0;

    if (d == 1) {
        double best = 0.0;
        for (const Vector& p : kept) best = std::max(best, p[0] - ref[0]);
        return best;
    }
    if (d == 2) {
        std::vector<std::pair<double, double>> pts;
        pts.reserve(kept.size());
        for (const Vector& p : kept) pts.emplace_back(p[0], p[1]);
        return hv2(std::move(pts), ref[0], ref[1]);
    }
    if (d == 3) {
        // Slice along z: between consecutive z-levels the covered xy-region
        // is fixed, equal to the 2D union over the points reaching it.
        std::vector<double> zs;
        for (const Vector& p : kept) zs.push_back(p[2]);
        std::sort(zs.begin(), zs.end());
        zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
        double vol = 0.0;
        double prev = ref[2];
        for (const double z : zs) {
            std::vector<std::pair<double, double>> slab;
            for (const Vector& p : kept)
                if (p[2] >= z) slab.emplace_back(p[0], p[1]);
            vol += (z - prev) * hv2(std::move(slab), ref[0], ref[1]);
            prev = z;
        }
        return vol;
    }

    // Monte Carlo over the bounding box of the kept points.
    Vector hi = kept.front();
    for (const Vector& p : kept) hi = hi.cwiseMax(p);
    double box = 1.0;
    for (int i = 0; i < d; ++i) box *= hi[i] - ref[i];
    if (mc_samples < 1)
        throw PreconditionError("hypervolume: d > 3 needs mc_samples >= 1");
    Rng rng(mc_seed, kHvStream);
    long hits = 0;
    Vector x(d);
    for (long t = 0; t < mc_samples; ++t) {
        for (int i = 0; i < d; ++i)
            x[i] = ref[i] + rng.uniform01() * (hi[i] - ref[i]);
        for (const Vector& p : kept) {
            if ((x.array() <= p.array()).all()) {
                ++hits;
                break;
            }
        }
    }
    const double f = static_cast<double>(hits) / static_cast<double>(mc_samples);
    if (std_error != nullptr)
        *std_error =
            box * std::sqrt(f * (1.0 - f) / static_cast<double>(mc_samples));
    return box * f;
}

WeightGrid uniform_weight_grid_2d(int n) {
    if (n < 2) throw PreconditionError("uniform_weight_grid_2d: need n >= 2");
    WeightGrid grid;
    grid.points.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double a = static_cast<double>(i) / (n - 1);
        Vector w(2);
        w << 1.0 - a, a;
        grid.points.emplace_back(w);
    }
    // Adjacent grid points differ by h in each coordinate; the farthest
    // simplex point sits midway, at h/sqrt(2) from both neighbours.
    grid.covering_radius = std::sqrt(2.0) / (2.0 * (n - 1));
    return grid;
}

TransferBoundReport transfer_bound_audit(const TabularMOMDP& m, const SFSet& set,
                              const std::vector<WeightVector>& test_weights,
                              const WeightGrid& grid, double tol) {
    if (set.empty()) throw EmptySetError("transfer_bound_audit: empty SF set");
    for (std::size_t i = 0; i < set.size(); ++i)
        if (set[i].tag != SolverTag::Planner)
            throw PreconditionError("transfer_bound_audit: entry " +
                                    std::to_string(i) +
                                    " was not planner-solved");

    TransferBoundReport rep;
    rep.phi_max = feature_norm_max(m);
    for (const WeightVector& wv : test_weights) {
        const auto vi = value_iteration(m, wv.vec(), tol);
        const double v_star = m.initial_dist.dot(vi.values);
        const double v_gpi = evaluate_gpi_policy(m, set, wv.vec(), tol);
        rep.observed_gap = std::max(rep.observed_gap, v_star - v_gpi);
    }
    for (const WeightVector& g : grid.points) {
        double dmin = kInf;
        for (std::size_t i = 0; i < set.size(); ++i)
            dmin = std::min(dmin, (g.vec() - set[i].source_weight).norm());
        rep.grid_maxmin = std::max(rep.grid_maxmin, dmin);
    }
    rep.bound = 2.0 / (1.0 - m.gamma) * rep.phi_max *
                (rep.grid_maxmin + grid.covering_radius);
    rep.within_bound = rep.observed_gap <= rep.bound + 1e-6;
    return rep;
}

std::vector<LifelongPhase> lifelong_eval(const TabularMOMDP& m,
                                         const SFSet& set, int num_phases,
                                         long steps_per_phase,
                                         std::uint64_t seed, double tol) {
    if (set.empty()) throw EmptySetError("lifelong_eval: empty SF set");
    if (num_phases < 0 || steps_per_phase < 1)
        throw PreconditionError("lifelong_eval: need num_phases >= 0 and "
                                "steps_per_phase >= 1");
    constexpr long kEpisodeCap = 1000;

    Rng task_rng(seed, kLifelongStream);
    Rng env_rng(seed, kLifelongStream + 1);
    std::vector<LifelongPhase> trace;
    trace.reserve(static_cast<std::size_t>(num_phases));
    for (int phase = 0; phase < num_phases; ++phase) {
        LifelongPhase rec;
        rec.phase = phase;
        rec.weight = task_rng.dirichlet_flat(m.d);
        const PolicyTable pi = materialize_gpi_policy(m, set, rec.weight);
        rec.v_gpi = policy_value(m, pi, rec.weight, tol);

        std::vector<double> returns;
        while (rec.steps < steps_per_phase) {
            int s = sample_index(m.initial_dist, env_rng);
            double ret = 0.0;
            double disc = 1.0;
            for (long t = 0; t < kEpisodeCap; ++t) {
                if (m.is_terminal(s)) break;
                const Outcome& o = sample_outcome(m.outcomes(s, pi[s]),
                                                  env_rng);
                ret += disc * o.phi.dot(rec.weight);
                disc *= m.gamma;
                s = o.next;
                ++rec.steps;
                if (rec.steps >= steps_per_phase) break;
            }
            returns.push_back(ret);
            ++rec.episodes;
        }
        const double n = static_cast<double>(rec.episodes);
        rec.mean_return =
            std::accumulate(returns.begin(), returns.end(), 0.0) / n;
        if (rec.episodes > 1) {
            double ss = 0.0;
            for (double r : returns) ss += (r - rec.mean_return) *
                                           (r - rec.mean_return);
            rec.std_error = std::sqrt(ss / (n - 1.0) / n);
        }
        trace.push_back(std::move(rec));
    }
    return trace;
}

VertexCheckReport vertex_discovery_check(const TabularMOMDP& m,
                                         const RunResult& res) {
    for (int s = 0; s < m.num_states; ++s)
        if (m.is_terminal(s))
            throw PreconditionError("vertex_discovery_check: MDP must be "
                                    "continuing");
    if (m.d != m.num_states)
        throw PreconditionError("vertex_discovery_check: features are not "
                                "one-hot (d != num_states)");
    double count = 1.0;
    for (int s = 0; s < m.num_states; ++s) count *= m.num_actions;
    if (count > 4096.0)
        throw PreconditionError("vertex_discovery_check: model too large "
                                "for brute force");
    const long num_policies = static_cast<long>(count);
    const int S = m.num_states;

    // SR of a fixed policy by direct solve: x = R_pi + gamma P_pi x per
    // feature column, so X = (I - gamma P_pi)^{-1} R_pi.
    std::vector<Vector> srs;
    PolicyTable pi(static_cast<std::size_t>(S), 0);
    for (long code = 0; code < num_policies; ++code) {
        long rem = code;
        for (int s = 0; s < S; ++s) {
            pi[static_cast<std::size_t>(s)] =
                static_cast<int>(rem % m.num_actions);
            rem /= m.num_actions;
        }
        Matrix sys = Matrix::Identity(S, S);
        Matrix rhs = Matrix::Zero(S, m.d);
        for (int s = 0; s < S; ++s)
            for (const Outcome& o : m.outcomes(s, pi[s])) {
                sys(s, o.next) -= m.gamma * o.prob;
                rhs.row(s) += o.prob * o.phi.transpose();
            }
        const Matrix x = sys.partialPivLu().solve(rhs);
        Vector sr = Vector::Zero(m.d);
        for (int s = 0; s < S; ++s)
            sr += m.initial_dist[s] * x.row(s).transpose();
        bool dup = false;
        for (const Vector& q : srs)
            if ((q - sr).cwiseAbs().maxCoeff() <= kSFDedupTol) {
                dup = true;
                break;
            }
        if (!dup) srs.push_back(std::move(sr));
    }

    VertexCheckReport rep;
    rep.num_policies = static_cast<int>(num_policies);
    rep.num_distinct_srs = static_cast<int>(srs.size());

    // Every SR shares the component sum 1/(1-gamma), so the whole set ties
    // at the uniform weight and weak pruning keeps everything; only the
    // unique-maximizer vertices are comparable.
    const auto oracle_idx = vertex_prune_indices(srs);
    const std::vector<Vector> found = res.set.expected_sfs();
    const auto found_idx = vertex_prune_indices(found);
    rep.oracle_vertices = static_cast<int>(oracle_idx.size());
    rep.discovered_vertices = static_cast<int>(found_idx.size());

    std::vector<bool> used(found_idx.size(), false);
    bool all_matched = true;
    for (const int oi : oracle_idx) {
        double best = kInf;
        int best_j = -1;
        for (std::size_t j = 0; j < found_idx.size(); ++j) {
            if (used[j]) continue;
            const double dist =
                (srs[oi] - found[found_idx[j]]).cwiseAbs().maxCoeff();
            if (dist < best) {
                best = dist;
                best_j = static_cast<int>(j);
            }
        }
        if (best_j < 0 || best > kSFDedupTol) {
            all_matched = false;
            continue;
        }
        used[static_cast<std::size_t>(best_j)] = true;
        rep.max_deviation = std::max(rep.max_deviation, best);
    }
    rep.matched = all_matched && oracle_idx.size() == found_idx.size();
    return rep;
}

} // namespace sfols

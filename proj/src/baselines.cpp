#include "sfols/baselines.hpp"

#include <cmath>
#include <limits>

#include "sfols/eval.hpp"
#include "sfols/lp.hpp"
#include "sfols/rng.hpp"

namespace sfols {

namespace {

constexpr std::uint64_t kWcpiStream = 0x3c9;
constexpr std::uint64_t kRandomStream = 0x77d;

struct MetricContext {
    std::vector<WeightVector> weights;
    Vector hv_ref;
    double tol = 1e-8;
};

MetricContext make_metric_context(const TabularMOMDP& m,
                                  const BaselineConfig& cfg) {
    MetricContext ctx;
    ctx.weights = sample_simplex_weights(cfg.metrics.num_weights, m.d,
                                         cfg.metrics.seed);
    ctx.hv_ref = cfg.metrics.hv_ref ? *cfg.metrics.hv_ref : Vector::Zero(m.d);
    if (ctx.hv_ref.size() != m.d)
        throw DimensionMismatchError("baseline: hv_ref dimension does not "
                                     "match d");
    ctx.tol = cfg.solver.tol;
    return ctx;
}

IterationRow make_row(int iter, const Vector& w, bool inserted,
                      const TabularMOMDP& m, const SFSet& set,
                      const MetricContext& ctx) {
    IterationRow row;
    row.iteration = iter;
    row.solved_weight = w;
    row.popped_priority = std::numeric_limits<double>::quiet_NaN();
    row.inserted = inserted;
    row.psi_size = static_cast<int>(set.size());
    fill_iteration_metrics(row, m, set, ctx.weights, ctx.hv_ref, ctx.tol);
    row.max_queue_priority = std::numeric_limits<double>::quiet_NaN();
    row.psi_snapshot = set.expected_sfs();
    return row;
}

std::uint64_t task_seed(std::uint64_t seed, std::uint64_t stream, int iter) {
    return mix64(seed ^ mix64(stream + static_cast<std::uint64_t>(iter)));
}

// argmin over the simplex of max_i psi_i . w, via min t s.t. psi_i . w <= t.
WeightVector worst_case_weight(const SFSet& set, double value_bound) {
    const int d = set.dim();
    const int n = static_cast<int>(set.size());
    LinearProgram lp;
    lp.c = Vector::Zero(d + 1);
    lp.c[d] = -1.0; // maximize -t
    lp.A = Matrix::Zero(n + 2, d + 1);
    lp.b = Vector::Zero(n + 2);
    for (int i = 0; i < n; ++i) {
        lp.A.row(i).head(d) = set[static_cast<std::size_t>(i)]
                                  .expected_sf.transpose();
        lp.A(i, d) = -1.0;
    }
    lp.A.row(n).head(d).setConstant(1.0);
    lp.b[n] = 1.0;
    lp.A.row(n + 1).head(d).setConstant(-1.0);
    lp.b[n + 1] = -1.0;
    lp.lo = Vector::Zero(d + 1);
    lp.hi = Vector::Ones(d + 1);
    lp.lo[d] = -value_bound - 1.0;
    lp.hi[d] = value_bound + 1.0;

    const LPResult res = solve_lp(lp);
    if (res.status != LPResult::Status::Optimal)
        throw NumericalError("wcpi: worst-case weight LP did not solve to "
                             "optimality");
    Vector w = res.x.head(d);
    for (int i = 0; i < d; ++i) w[i] = std::max(0.0, w[i]);
    w /= w.sum();
    return WeightVector(w);
}

} // namespace

RunResult wcpi_run(const TabularMOMDP& m, const BaselineConfig& cfg,
                   int max_iters) {
    if (max_iters < 1)
        throw PreconditionError("wcpi_run: max_iters must be >= 1");
    const MetricContext ctx = make_metric_context(m, cfg);
    const double value_bound = feature_norm_max(m) / (1.0 - m.gamma);

    RunResult result;
    result.algorithm = "wcpi";
    SFSet set;

    Rng rng(cfg.seed, kWcpiStream);
    Vector w = rng.dirichlet_flat(m.d);
    for (int iter = 1; iter <= max_iters; ++iter) {
        if (iter > 1) w = worst_case_weight(set, value_bound).vec();
        const double before =
            set.empty() ? -kInf : smp_value(set, w).first;

        PolicyEntry pe = solve_task(m, w, cfg.solver, set,
                                    task_seed(cfg.seed, kWcpiStream, iter));
        const bool inserted = !set.contains(pe.expected_sf);
        if (inserted) set.insert(std::move(pe));
        result.solved_weights.push_back(w);
        result.iterations.push_back(make_row(iter, w, inserted, m, set, ctx));

        const double after = smp_value(set, w).first;
        if (iter > 1 && after - before < 1e-6) break;
    }

    result.set = std::move(set);
    return result;
}

RunResult sip_run(const TabularMOMDP& m, const BaselineConfig& cfg,
                  double delta) {
    if (delta <= 0.0)
        throw PreconditionError("sip_run: delta must be positive");
    const MetricContext ctx = make_metric_context(m, cfg);

    RunResult result;
    result.algorithm = "sip";
    SFSet set;
    for (int i = 0; i < m.d; ++i) {
        Vector w = Vector::Constant(m.d, -delta);
        w[i] = 1.0;
        const RawWeight raw(w); // off-simplex by design

        PolicyEntry pe = solve_task(m, raw.vec(), cfg.solver, set,
                                    task_seed(cfg.seed, 0x51bu, i + 1));
        const bool inserted = !set.contains(pe.expected_sf);
        if (inserted) set.insert(std::move(pe));
        result.solved_weights.push_back(raw.vec());
        result.iterations.push_back(
            make_row(i + 1, raw.vec(), inserted, m, set, ctx));
    }

    result.set = std::move(set);
    return result;
}

RunResult random_weights_run(const TabularMOMDP& m, const BaselineConfig& cfg,
                             int num_iters) {
    if (num_iters < 1)
        throw PreconditionError("random_weights_run: num_iters must be >= 1");
    const MetricContext ctx = make_metric_context(m, cfg);

    RunResult result;
    result.algorithm = "random_weights";
    SFSet set;
    Rng rng(cfg.seed, kRandomStream);
    for (int iter = 1; iter <= num_iters; ++iter) {
        const Vector w = rng.dirichlet_flat(m.d);
        PolicyEntry pe = solve_task(m, w, cfg.solver, set,
                                    task_seed(cfg.seed, kRandomStream, iter));
        const bool inserted = !set.contains(pe.expected_sf);
        if (inserted) set.insert(std::move(pe));
        result.solved_weights.push_back(w);
        result.iterations.push_back(make_row(iter, w, inserted, m, set, ctx));
    }

    result.set = std::move(set);
    return result;
}

} // namespace sfols

#include "sfols/solver.hpp"

namespace sfols {

PolicyEntry solve_task(const TabularMOMDP& m, const Vector& w,
                       const SolverConfig& solver, const SFSet& current,
                       std::uint64_t task_seed) {
    PolicyEntry entry;
    entry.source_weight = w;
    if (solver.type == SolverConfig::Type::Planner) {
        entry.policy =
            value_iteration(m, w, solver.tol, solver.max_sweeps).policy;
        entry.tag = SolverTag::Planner;
    } else {
        QLearnConfig qcfg = solver.qlearn;
        qcfg.seed = task_seed;
        entry.policy = learn_sf_qlearning(m, w, current, qcfg).greedy;
        entry.tag = SolverTag::QLearning;
    }
    entry.sf_table = policy_sf_evaluation(m, entry.policy, solver.tol,
                                          solver.max_sweeps);
    entry.expected_sf = expected_sf(m, entry.sf_table, entry.policy);
    return entry;
}

} // namespace sfols

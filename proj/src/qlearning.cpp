#include "sfols/qlearning.hpp"

#include <cmath>

#include "sfols/rng.hpp"

namespace sfols {

namespace {

// GPI action over the previous tables and the table being learned.
int behavior_gpi_action(const SFSet& previous, const Matrix& cur, int s,
                        int num_actions, const Vector& w) {
    double best = -kInf;
    int best_a = 0;
    for (int a = 0; a < num_actions; ++a) {
        const Eigen::Index ra = static_cast<Eigen::Index>(s) * num_actions + a;
        double q = cur.row(ra).dot(w);
        for (const auto& e : previous.entries())
            q = std::max(q, e.sf_table.psi.row(ra).dot(w));
        if (q > best) {
            best = q;
            best_a = a;
        }
    }
    return best_a;
}

} // namespace

QLearnResult learn_sf_qlearning(const TabularMOMDP& m, const Vector& w,
                                const SFSet& previous,
                                const QLearnConfig& cfg) {
    if (w.size() != m.d)
        throw DimensionMismatchError("learn_sf_qlearning: weight length "
                                     "does not match d");
    if (cfg.num_steps < 1 || cfg.episode_cap < 1)
        throw PreconditionError("learn_sf_qlearning: bad step budget");
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0))
        throw PreconditionError("learn_sf_qlearning: alpha must lie in "
                                "(0, 1]");
    if (cfg.epsilon_start < 0.0 || cfg.epsilon_start > 1.0 ||
        cfg.epsilon_end < 0.0 || cfg.epsilon_end > 1.0)
        throw PreconditionError("learn_sf_qlearning: epsilons must lie in "
                                "[0, 1]");
    const int S = m.num_states;
    const int A = m.num_actions;

    QLearnResult res;
    res.table.num_states = S;
    res.table.num_actions = A;
    res.table.d = m.d;
    if (previous.empty()) {
        res.table.psi = Matrix::Zero(static_cast<Eigen::Index>(S) * A, m.d);
    } else {
        // warm start from the previous policy that transfers best to w
        res.table.psi = previous[smp_value(previous, w).second].sf_table.psi;
    }
    Matrix& psi = res.table.psi;

    Rng explore(cfg.seed, 0x9e01);
    Rng env(cfg.seed, 0x9e02);

    auto sample_initial = [&]() {
        const double u = env.uniform01();
        double acc = 0.0;
        for (int s = 0; s < S; ++s) {
            acc += m.initial_dist[s];
            if (u < acc) return s;
        }
        return S - 1;
    };

    const long decay = cfg.epsilon_decay_steps > 0 ? cfg.epsilon_decay_steps
                                                   : std::max(1L, cfg.num_steps);
    int s = sample_initial();
    int steps_in_episode = 0;
    for (long t = 0; t < cfg.num_steps; ++t) {
        const double frac = std::min(1.0, static_cast<double>(t) / decay);
        const double eps =
            cfg.epsilon_start + (cfg.epsilon_end - cfg.epsilon_start) * frac;

        int a;
        if (explore.bernoulli(1.0 - eps))
            a = behavior_gpi_action(previous, psi, s, A, w);
        else
            a = explore.uniform_int(A);

        // sample the environment transition
        const auto& outs = m.outcomes(s, a);
        const double u = env.uniform01();
        double acc = 0.0;
        const Outcome* picked = &outs.back();
        for (const auto& o : outs) {
            acc += o.prob;
            if (u < acc) {
                picked = &o;
                break;
            }
        }
        const int s2 = picked->next;

        const Eigen::Index ra = static_cast<Eigen::Index>(s) * A + a;
        if (m.terminal[s2]) {
            psi.row(ra) += cfg.alpha * (picked->phi.transpose() - psi.row(ra));
        } else {
            const int a2 = behavior_gpi_action(previous, psi, s2, A, w);
            const Eigen::Index ra2 = static_cast<Eigen::Index>(s2) * A + a2;
            psi.row(ra) +=
                cfg.alpha * (picked->phi.transpose() +
                             m.gamma * psi.row(ra2) - psi.row(ra));
        }

        ++steps_in_episode;
        if (m.terminal[s2] || steps_in_episode >= cfg.episode_cap) {
            s = sample_initial();
            steps_in_episode = 0;
            ++res.episodes;
        } else {
            s = s2;
        }
    }

    res.greedy.resize(S, 0);
    for (int st = 0; st < S; ++st) {
        double best = -kInf;
        int best_a = 0;
        for (int a = 0; a < A; ++a) {
            const double q =
                psi.row(static_cast<Eigen::Index>(st) * A + a).dot(w);
            if (q > best) {
                best = q;
                best_a = a;
            }
        }
        res.greedy[st] = best_a;
    }
    return res;
}

} // namespace sfols

#include "sfols/momdp.hpp"

#include <cmath>
#include <string>

namespace sfols {

namespace {

constexpr double kProbTol = 1e-9;

bool all_finite(const Vector& v) { return v.allFinite(); }

} // namespace

void validate_momdp(const TabularMOMDP& m) {
    if (m.num_states < 1 || m.num_actions < 1 || m.d < 1)
        throw DimensionMismatchError("momdp: num_states, num_actions and d "
                                     "must all be positive");
    if (!(m.gamma >= 0.0 && m.gamma < 1.0))
        throw PreconditionError("momdp: gamma must lie in [0, 1)");
    if (m.initial_dist.size() != m.num_states)
        throw DimensionMismatchError("momdp: initial distribution has wrong "
                                     "length");
    if (static_cast<int>(m.terminal.size()) != m.num_states)
        throw DimensionMismatchError("momdp: terminal mask has wrong length");
    if (m.rows.size() !=
        static_cast<std::size_t>(m.num_states) * m.num_actions)
        throw DimensionMismatchError("momdp: transition table has wrong "
                                     "number of rows");

    double mu_sum = 0.0;
    for (int s = 0; s < m.num_states; ++s) {
        if (m.initial_dist[s] < -kProbTol)
            throw PreconditionError("momdp: negative initial probability");
        mu_sum += m.initial_dist[s];
    }
    if (std::abs(mu_sum - 1.0) > kProbTol)
        throw PreconditionError("momdp: initial distribution must sum to 1");

    for (int s = 0; s < m.num_states; ++s) {
        for (int a = 0; a < m.num_actions; ++a) {
            const auto& outs = m.outcomes(s, a);
            if (outs.empty())
                throw PreconditionError("momdp: empty outcome row at state " +
                                        std::to_string(s));
            double p_sum = 0.0;
            for (const auto& o : outs) {
                if (o.next < 0 || o.next >= m.num_states)
                    throw DimensionMismatchError(
                        "momdp: successor index out of range");
                if (o.prob < -kProbTol || !std::isfinite(o.prob))
                    throw PreconditionError("momdp: bad outcome probability");
                if (o.phi.size() != m.d)
                    throw DimensionMismatchError(
                        "momdp: feature vector has wrong dimension");
                if (!all_finite(o.phi))
                    throw PreconditionError("momdp: non-finite features");
                p_sum += o.prob;
            }
            if (std::abs(p_sum - 1.0) > kProbTol)
                throw PreconditionError(
                    "momdp: outcome probabilities at (s=" + std::to_string(s) +
                    ", a=" + std::to_string(a) + ") sum to " +
                    std::to_string(p_sum));
            if (m.is_terminal(s)) {
                // canonical encoding: a single zero-feature self-loop
                if (outs.size() != 1 || outs[0].next != s ||
                    outs[0].phi.lpNorm<Eigen::Infinity>() != 0.0)
                    throw PreconditionError(
                        "momdp: terminal state " + std::to_string(s) +
                        " must be absorbing with zero features");
            }
        }
    }
}

WeightVector::WeightVector(Vector w) : w_(std::move(w)) {
    if (w_.size() < 1)
        throw DimensionMismatchError("weight: empty vector");
    double sum = 0.0;
    for (int i = 0; i < w_.size(); ++i) {
        if (!std::isfinite(w_[i]) || w_[i] < -1e-9)
            throw NegativeComponentError(
                "weight: component " + std::to_string(i) + " is negative", w_);
        sum += w_[i];
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw SumNotOneError("weight: components sum to " +
                                 std::to_string(sum) + ", expected 1",
                             w_);
}

RawWeight::RawWeight(Vector w) : w_(std::move(w)) {
    if (w_.size() < 1)
        throw DimensionMismatchError("weight: empty vector");
    if (!all_finite(w_))
        throw PreconditionError("weight: non-finite component");
}

WeightVector validate_weight(const Vector& w) { return WeightVector(w); }

double scalarize_reward(const TabularMOMDP& m, const Vector& w, int s, int a,
                        int s_next) {
    if (w.size() != m.d)
        throw DimensionMismatchError("scalarize_reward: weight dimension " +
                                     std::to_string(w.size()) +
                                     " does not match d=" + std::to_string(m.d));
    if (s < 0 || s >= m.num_states || a < 0 || a >= m.num_actions)
        throw DimensionMismatchError("scalarize_reward: state or action out "
                                     "of range");
    for (const auto& o : m.outcomes(s, a)) {
        if (o.next == s_next) return o.phi.dot(w);
    }
    throw PreconditionError("scalarize_reward: successor " +
                            std::to_string(s_next) +
                            " not on the support of p(.|s, a)");
}

TabularMOMDP one_hot_wrap(const TabularMOMDP& m) {
    TabularMOMDP out;
    out.num_states = m.num_states;
    out.num_actions = m.num_actions;
    out.d = m.num_states;
    out.gamma = m.gamma;
    out.initial_dist = m.initial_dist;
    out.terminal = m.terminal;
    out.rows.resize(m.rows.size());
    for (int s = 0; s < m.num_states; ++s) {
        for (int a = 0; a < m.num_actions; ++a) {
            auto& row = out.outcomes(s, a);
            for (const auto& o : m.outcomes(s, a)) {
                Vector phi = Vector::Zero(out.d);
                if (!m.is_terminal(s)) phi[o.next] = 1.0;
                row.push_back(Outcome{o.next, o.prob, std::move(phi)});
            }
        }
    }
    return out;
}

double feature_norm_max(const TabularMOMDP& m) {
    double best = 0.0;
    for (const auto& row : m.rows)
        for (const auto& o : row) best = std::max(best, o.phi.norm());
    return best;
}

} // namespace sfols

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <vector>

#include "sfols/envs.hpp"
#include "sfols/gpi.hpp"
#include "sfols/planner.hpp"
#include "sfols/rng.hpp"
#include "sfols/solver.hpp"

using namespace sfols;

namespace {

PolicyEntry make_entry(const TabularMOMDP& m, const PolicyTable& pi,
                       const Vector& trained_on) {
    PolicyEntry e;
    e.source_weight = trained_on;
    e.policy = pi;
    e.sf_table = policy_sf_evaluation(m, pi, 1e-11);
    e.expected_sf = expected_sf(m, e.sf_table, pi);
    return e;
}

PolicyEntry synthetic_entry(int num_states, int num_actions,
                            const Matrix& psi, const Vector& esf) {
    PolicyEntry e;
    e.source_weight = Vector::Zero(esf.size());
    e.policy.assign(num_states, 0);
    e.sf_table.num_states = num_states;
    e.sf_table.num_actions = num_actions;
    e.sf_table.d = static_cast<int>(esf.size());
    e.sf_table.psi = psi;
    e.expected_sf = esf;
    return e;
}

std::vector<Vector> to_vectors(std::initializer_list<std::pair<double, double>> ps) {
    std::vector<Vector> out;
    for (const auto& p : ps) {
        Vector v(2);
        v << p.first, p.second;
        out.push_back(v);
    }
    return out;
}

} // namespace

TEST_CASE("SFSet rejects duplicates and keeps order") {
    SFSet set;
    CHECK(set.empty());
    CHECK(set.dim() == 0);
    Matrix psi = Matrix::Zero(2, 2);
    Vector a(2), b(2), close(2);
    a << 1.0, 0.0;
    b << 0.0, 1.0;
    close << 1.0 + 1e-8, 0.0;
    set.insert(synthetic_entry(1, 2, psi, a));
    set.insert(synthetic_entry(1, 2, psi, b));
    CHECK(set.size() == 2);
    CHECK(set.dim() == 2);
    CHECK(set.contains(close));
    CHECK_THROWS_AS(set.insert(synthetic_entry(1, 2, psi, close)),
                    PreconditionError);
    const auto sfs = set.expected_sfs();
    REQUIRE(sfs.size() == 2);
    CHECK(sfs[0] == a);
    CHECK(sfs[1] == b);
    CHECK(set[0].expected_sf == a);
}

TEST_CASE("gpi_action maximizes over entries and actions") {
    // two synthetic single-state entries with 2 actions each
    Matrix psi0(2, 2), psi1(2, 2);
    psi0 << 0.2, 0.0, /* a1 */ 0.9, 0.0;
    psi1 << 0.5, 0.0, /* a1 */ 0.1, 0.0;
    SFSet set;
    Vector e0(2), e1(2);
    e0 << 1.0, 0.0;
    e1 << 0.0, 1.0;
    set.insert(synthetic_entry(1, 2, psi0, e0));
    set.insert(synthetic_entry(1, 2, psi1, e1));
    Vector w(2);
    w << 1.0, 0.0;
    // best scalarized row is psi0's action 1 (0.9)
    CHECK(gpi_action(set, 0, w) == 1);
    CHECK_THROWS_AS(gpi_action(SFSet{}, 0, w), EmptySetError);
}

TEST_CASE("gpi_action ties break on the earliest entry, lowest action") {
    Matrix psi0(2, 2), psi1(2, 2);
    psi0 << 0.3, 0.0, /* a1 */ 0.7, 0.0;
    psi1 << 0.7, 0.0, /* a1 */ 0.7, 0.0;
    SFSet set;
    Vector e0(2), e1(2);
    e0 << 1.0, 0.0;
    e1 << 0.0, 1.0;
    set.insert(synthetic_entry(1, 2, psi0, e0));
    set.insert(synthetic_entry(1, 2, psi1, e1));
    Vector w(2);
    w << 1.0, 0.0;
    // 0.7 appears at (entry0, a1), (entry1, a0) and (entry1, a1);
    // the earliest entry wins even though its action index is larger
    CHECK(gpi_action(set, 0, w) == 1);
    // flipping the order changes the winner to action 0
    SFSet flipped;
    flipped.insert(synthetic_entry(1, 2, psi1, e1));
    flipped.insert(synthetic_entry(1, 2, psi0, e0));
    CHECK(gpi_action(flipped, 0, w) == 0);
}

TEST_CASE("smp_value returns the max and the earliest argmax") {
    SFSet set;
    Matrix psi = Matrix::Zero(2, 2);
    Vector a(2), b(2), c(2);
    a << 1.0, 0.0;
    b << 0.0, 1.0;
    c << 0.75, 0.75;
    set.insert(synthetic_entry(1, 2, psi, a));
    set.insert(synthetic_entry(1, 2, psi, b));
    set.insert(synthetic_entry(1, 2, psi, c));
    Vector w(2);
    w << 0.5, 0.5;
    auto [v, idx] = smp_value(set, w);
    CHECK(v == doctest::Approx(0.75));
    CHECK(idx == 2);
    Vector corner(2);
    corner << 1.0, 0.0;
    auto [v2, idx2] = smp_value(set, corner);
    CHECK(v2 == doctest::Approx(1.0));
    CHECK(idx2 == 0);
    // exact tie between entries 0 and 1 at the uniform weight without c
    SFSet two;
    two.insert(synthetic_entry(1, 2, psi, a));
    two.insert(synthetic_entry(1, 2, psi, b));
    CHECK(smp_value(two, w).second == 0);
    CHECK_THROWS_AS(smp_value(SFSet{}, w), EmptySetError);
}

TEST_CASE("one stored policy lets GPI stitch the whole toy front") {
    const TabularMOMDP m = make_toy3();
    SFSet set;
    Vector w0(2);
    w0 << 1.0, 0.0;
    set.insert(make_entry(m, {0, 0}, w0));
    // the single SF table exposes every action, so GPI acts optimally for
    // all weights even though the set max does not
    for (double x : {1.0, 0.7, 0.5, 0.2, 0.0}) {
        Vector w(2);
        w << x, 1.0 - x;
        const double v_star =
            m.initial_dist.dot(value_iteration(m, w).values);
        CHECK(evaluate_gpi_policy(m, set, w) ==
              doctest::Approx(v_star).epsilon(1e-9));
    }
    // while the set-max value lags at the opposite corner
    Vector opposite(2);
    opposite << 0.0, 1.0;
    CHECK(smp_value(set, opposite).first == doctest::Approx(0.0));
}

TEST_CASE("GPI dominates every entry it is built from") {
    for (std::uint64_t seed : {5ULL, 6ULL, 7ULL}) {
        const TabularMOMDP m = build_random_momdp(seed, 6, 3, 2, 0.2, 0.9);
        Vector wa(2), wb(2);
        wa << 1.0, 0.0;
        wb << 0.0, 1.0;
        SFSet set;
        set.insert(make_entry(m, value_iteration(m, wa, 1e-10).policy, wa));
        const auto pi_b = value_iteration(m, wb, 1e-10).policy;
        if (!set.contains(expected_sf(m, policy_sf_evaluation(m, pi_b, 1e-11), pi_b)))
            set.insert(make_entry(m, pi_b, wb));
        Rng rng(seed, 99);
        for (int trial = 0; trial < 5; ++trial) {
            const Vector w = rng.dirichlet_flat(2);
            const double v_gpi = evaluate_gpi_policy(m, set, w);
            for (const auto& entry : set.entries()) {
                const double v_entry = policy_value(m, entry.policy, w, 1e-10);
                CHECK(v_gpi >= v_entry - 1e-8);
            }
            // GPI value also dominates the set max (scalarized SFs)
            CHECK(v_gpi >= smp_value(set, w).first - 1e-8);
            // and optimality caps everything
            const double v_star =
                m.initial_dist.dot(value_iteration(m, w, 1e-10).values);
            CHECK(v_gpi <= v_star + 1e-8);
        }
    }
}

TEST_CASE("materialized GPI policy matches gpi_action everywhere") {
    const TabularMOMDP m = build_random_momdp(17, 5, 3, 2, 0.2, 0.9);
    Vector wa(2);
    wa << 0.5, 0.5;
    SFSet set;
    set.insert(make_entry(m, value_iteration(m, wa, 1e-10).policy, wa));
    Vector w(2);
    w << 0.9, 0.1;
    const PolicyTable pi = materialize_gpi_policy(m, set, w);
    for (int s = 0; s < m.num_states; ++s)
        CHECK(pi[s] == gpi_action(set, s, w));
}

TEST_CASE("gpi_expanded_sfs discovers stitched policies") {
    const TabularMOMDP m = make_toy3();
    SFSet set;
    Vector w0(2);
    w0 << 1.0, 0.0;
    set.insert(make_entry(m, {0, 0}, w0));
    std::vector<WeightVector> probes;
    for (double x : {1.0, 0.5, 0.0}) {
        Vector w(2);
        w << x, 1.0 - x;
        probes.push_back(validate_weight(w));
    }
    const auto expanded = gpi_expanded_sfs(m, set, probes, 1e-11);
    REQUIRE(expanded.size() == 3);
    const auto want = to_vectors({{1.0, 0.0}, {0.75, 0.75}, {0.0, 1.0}});
    for (const auto& target : want) {
        bool found = false;
        for (const auto& got : expanded)
            found = found ||
                    (got - target).lpNorm<Eigen::Infinity>() < 1e-9;
        CHECK(found);
    }
}

TEST_CASE("weak pruning keeps boundary-optimal vectors") {
    const auto drop_mid =
        to_vectors({{1.0, 0.0}, {0.0, 1.0}, {0.4, 0.4}});
    const auto kept = ccs_prune_indices(drop_mid);
    CHECK(kept == std::vector<int>{0, 1});

    const auto keep_mid =
        to_vectors({{1.0, 0.0}, {0.0, 1.0}, {0.6, 0.6}});
    CHECK(ccs_prune_indices(keep_mid) == std::vector<int>{0, 1, 2});

    // a point on the segment between the extremes ties at one weight:
    // weak pruning keeps it, vertex pruning does not
    const auto on_edge =
        to_vectors({{1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}});
    CHECK(ccs_prune_indices(on_edge) == std::vector<int>{0, 1, 2});
    CHECK(vertex_prune_indices(on_edge) == std::vector<int>{0, 1});
}

TEST_CASE("vertex pruning tolerates exact duplicates") {
    const auto dup = to_vectors({{1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
    const auto kept = vertex_prune_indices(dup);
    // duplicates are skipped as rivals, so both copies survive; the
    // dominated structure is what matters
    CHECK(std::find(kept.begin(), kept.end(), 2) != kept.end());
    for (int idx : kept) CHECK(idx >= 0);
    CHECK(kept.size() >= 2);
}

TEST_CASE("pruning is idempotent") {
    const auto pts =
        to_vectors({{1.0, 0.0}, {0.9, 0.2}, {0.5, 0.5}, {0.0, 1.0},
                    {0.3, 0.3}});
    const auto once = ccs_prune_indices(pts);
    std::vector<Vector> surviving;
    for (int i : once) surviving.push_back(pts[i]);
    const auto twice = ccs_prune_indices(surviving);
    REQUIRE(twice.size() == once.size());
    for (std::size_t i = 0; i < twice.size(); ++i)
        CHECK(twice[i] == static_cast<int>(i));
}

TEST_CASE("prune_to_ccs drops dominated set entries") {
    const TabularMOMDP m = make_toy3();
    SFSet set;
    Vector w0(2), w1(2);
    w0 << 1.0, 0.0;
    w1 << 0.0, 1.0;
    set.insert(make_entry(m, {0, 0}, w0));
    set.insert(make_entry(m, {1, 0}, w1));
    // a dominated mixture policy cannot exist in toy3, so fake one
    Matrix psi = Matrix::Zero(6, 2);
    Vector weak(2);
    weak << 0.3, 0.3;
    set.insert(synthetic_entry(2, 3, psi, weak));
    const SFSet pruned = prune_to_ccs(set);
    CHECK(pruned.size() == 2);
    CHECK(pruned[0].expected_sf == set[0].expected_sf);
    CHECK(pruned[1].expected_sf == set[1].expected_sf);
}

TEST_CASE("solver tags round-trip through strings") {
    CHECK(to_string(SolverTag::Planner) == "planner");
    CHECK(to_string(SolverTag::QLearning) == "qlearning");
    CHECK(solver_tag_from_string("planner") == SolverTag::Planner);
    CHECK(solver_tag_from_string("qlearning") == SolverTag::QLearning);
    CHECK_THROWS_AS(solver_tag_from_string("sarsa"), std::invalid_argument);
}

TEST_CASE("solve_task packages exact SF geometry in both modes") {
    const TabularMOMDP m = make_toy3();
    Vector w(2);
    w << 1.0, 0.0;
    SolverConfig planner;
    const PolicyEntry a = solve_task(m, w, planner, SFSet{}, 1);
    CHECK(a.tag == SolverTag::Planner);
    CHECK(a.expected_sf[0] == doctest::Approx(1.0));
    CHECK(a.policy[0] == 0);

    SolverConfig qcfg;
    qcfg.type = SolverConfig::Type::QLearning;
    qcfg.qlearn.num_steps = 20000;
    const PolicyEntry b = solve_task(m, w, qcfg, SFSet{}, 1);
    CHECK(b.tag == SolverTag::QLearning);
    // exact re-evaluation means the stored SF is exact regardless of noise
    CHECK(b.expected_sf[0] == doctest::Approx(1.0));
    CHECK(b.expected_sf[1] == doctest::Approx(0.0));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <deque>
#include <set>
#include <vector>

#include "sfols/envs.hpp"
#include "sfols/planner.hpp"

using namespace sfols;

namespace {

/**
 * Deterministic-shortest-path oracle for episodic grids: breadth-first
 * search over the MOMDP graph from the initial state, using only the stored
 * outcome rows. Returns, for every terminal-entering transition, the
 * minimum step count T and the feature vector collected on that last step.
 * Intermediate steps are assumed to emit `step_phi` (checked).
 */
struct ReachOption {
    int steps = 0; // steps to enter the terminal state
    Vector last_phi;
};

std::vector<ReachOption> enumerate_reachable_exits(const TabularMOMDP& m,
                                                   const Vector& step_phi) {
    int start = -1;
    for (int s = 0; s < m.num_states; ++s)
        if (m.initial_dist[s] == 1.0) start = s;
    REQUIRE(start >= 0);

    std::vector<int> dist(m.num_states, -1);
    dist[start] = 0;
    std::deque<int> frontier{start};
    std::vector<ReachOption> exits;
    while (!frontier.empty()) {
        const int s = frontier.front();
        frontier.pop_front();
        for (int a = 0; a < m.num_actions; ++a) {
            const auto& outs = m.outcomes(s, a);
            REQUIRE(outs.size() == 1); // oracle only handles deterministic
            const Outcome& o = outs[0];
            if (m.is_terminal(o.next)) {
                exits.push_back(ReachOption{dist[s] + 1, o.phi});
            } else {
                CHECK((o.phi - step_phi).lpNorm<Eigen::Infinity>() == 0.0);
                if (dist[o.next] < 0) {
                    dist[o.next] = dist[s] + 1;
                    frontier.push_back(o.next);
                }
            }
        }
    }
    return exits;
}

// Optimal scalarized value: the best exit taken along a shortest path (the
// value of any fixed exit decays strictly with extra steps), or never
// exiting at all.
double oracle_value(const std::vector<ReachOption>& exits, const Vector& w,
                    const Vector& step_phi, double gamma) {
    const double step_reward = step_phi.dot(w);
    double best = step_reward / (1.0 - gamma); // wander forever
    for (const auto& e : exits) {
        double v = 0.0;
        for (int t = 0; t + 1 < e.steps; ++t) v += std::pow(gamma, t) * step_reward;
        v += std::pow(gamma, e.steps - 1) * e.last_phi.dot(w);
        best = std::max(best, v);
    }
    return best;
}

} // namespace

TEST_CASE("deep sea treasure structure") {
    const TabularMOMDP m = build_dst(DSTConfig{});
    CHECK(m.num_states == 110);
    CHECK(m.num_actions == 4);
    CHECK(m.d == 2);
    CHECK(m.gamma == 0.99);
    CHECK_NOTHROW(validate_momdp(m));
    int terminals = 0;
    for (int s = 0; s < m.num_states; ++s) terminals += m.is_terminal(s);
    CHECK(terminals == 10);
    // start in the top-left corner
    CHECK(m.initial_dist[0] == 1.0);
}

TEST_CASE("deep sea treasure values match shortest-path enumeration") {
    const DSTConfig cfg;
    const TabularMOMDP m = build_dst(cfg);
    Vector step_phi(2);
    step_phi << 0.0, cfg.time_penalty;
    const auto exits = enumerate_reachable_exits(m, step_phi);
    // every treasure reachable, some via several last steps
    CHECK(exits.size() >= 10);

    for (double w0 : {1.0, 0.0, 0.5, 0.25, 0.8}) {
        Vector w(2);
        w << w0, 1.0 - w0;
        const auto res = value_iteration(m, w, 1e-10);
        const double vi = m.initial_dist.dot(res.values);
        CHECK(vi == doctest::Approx(oracle_value(exits, w, step_phi, m.gamma))
                        .epsilon(1e-8));
    }
}

TEST_CASE("deep sea treasure extreme weights have closed forms") {
    const TabularMOMDP m = build_dst(DSTConfig{});
    Vector time_only(2);
    time_only << 0.0, 1.0;
    // nearest treasure is one step below the start
    CHECK(m.initial_dist.dot(value_iteration(m, time_only).values) ==
          doctest::Approx(-1.0).epsilon(1e-9));

    Vector treasure_only(2);
    treasure_only << 1.0, 0.0;
    // deepest treasure, 19 steps away, wins undiscounted-by-time
    CHECK(m.initial_dist.dot(value_iteration(m, treasure_only).values) ==
          doctest::Approx(23.7 * std::pow(0.99, 18)).epsilon(1e-9));
}

TEST_CASE("dst configuration errors") {
    DSTConfig bad;
    bad.treasures[0].row = 99;
    CHECK_THROWS_AS(build_dst(bad), TreasureOutOfBoundsError);

    DSTConfig overlap;
    overlap.treasures[1] = overlap.treasures[0];
    CHECK_THROWS_AS(build_dst(overlap), InvalidGridError);

    DSTConfig on_start;
    on_start.treasures[0].row = 0;
    on_start.treasures[0].col = 0;
    CHECK_THROWS_AS(build_dst(on_start), InvalidGridError);

    DSTConfig tiny;
    tiny.rows = 0;
    CHECK_THROWS_AS(build_dst(tiny), InvalidGridError);
}

TEST_CASE("four-room walls form two pierced lines") {
    const auto walls = default_four_room_walls(13);
    const std::set<std::pair<int, int>> cells(walls.begin(), walls.end());
    CHECK(cells.size() == 21); // 2 * 11 minus the shared middle cell
    CHECK(cells.count({6, 6}) == 1);
    // doorways stay open
    CHECK(cells.count({6, 3}) == 0);
    CHECK(cells.count({6, 9}) == 0);
    CHECK(cells.count({3, 6}) == 0);
    CHECK(cells.count({9, 6}) == 0);
}

TEST_CASE("four-room desk model structure") {
    const TabularMOMDP m = build_four_room(four_room_desk_config());
    CHECK(m.num_states == 13 * 13 * 64);
    CHECK(m.num_actions == 4);
    CHECK(m.d == 3);
    CHECK(m.gamma == 0.95);
    CHECK_NOTHROW(validate_momdp(m));
    // every feature vector is a 0/1 type indicator or the all-ones goal
    for (const auto& row : m.rows) {
        for (const auto& o : row) {
            const double sum = o.phi.sum();
            CHECK((sum == 0.0 || sum == 1.0 || sum == 3.0));
            CHECK(o.phi.maxCoeff() <= 1.0);
            CHECK(o.phi.minCoeff() >= 0.0);
        }
    }
}

TEST_CASE("four-room pickups flip mask bits exactly once") {
    FourRoomConfig cfg = four_room_desk_config();
    const TabularMOMDP m = build_four_room(cfg);
    const int n_masks = 64;
    auto state_of = [&](int r, int c, int mask) {
        return (r * cfg.size + c) * n_masks + mask;
    };
    // the type-0 object at (2,2) is instance 0; step onto it from (1,2)
    const int before = state_of(1, 2, 0);
    const auto& outs = m.outcomes(before, 1); // down
    REQUIRE(outs.size() == 1);
    CHECK(outs[0].next == state_of(2, 2, 1));
    CHECK(outs[0].phi[0] == 1.0);
    CHECK(outs[0].phi.sum() == 1.0);
    // entering again with the bit set collects nothing
    const auto& again = m.outcomes(state_of(1, 2, 1), 1);
    CHECK(again[0].next == state_of(2, 2, 1));
    CHECK(again[0].phi.sum() == 0.0);
}

TEST_CASE("four-room goal emits every feature and terminates") {
    FourRoomConfig cfg = four_room_desk_config();
    const TabularMOMDP m = build_four_room(cfg);
    const int n_masks = 64;
    auto state_of = [&](int r, int c, int mask) {
        return (r * cfg.size + c) * n_masks + mask;
    };
    REQUIRE(cfg.goal == std::make_pair(0, 12));
    const auto& outs = m.outcomes(state_of(1, 12, 5), 0); // up into the goal
    REQUIRE(outs.size() == 1);
    CHECK(m.is_terminal(outs[0].next));
    CHECK(outs[0].phi == Vector::Ones(3));
    // mask is preserved on the way in
    CHECK(outs[0].next == state_of(0, 12, 5));
}

TEST_CASE("four-room bumping a wall or the border stands still") {
    FourRoomConfig cfg = four_room_desk_config();
    const TabularMOMDP m = build_four_room(cfg);
    const int n_masks = 64;
    auto state_of = [&](int r, int c, int mask) {
        return (r * cfg.size + c) * n_masks + mask;
    };
    // start is bottom-left; moving down or left leaves the agent in place
    const int start = state_of(12, 0, 0);
    CHECK(m.outcomes(start, 1)[0].next == start);
    CHECK(m.outcomes(start, 2)[0].next == start);
    // (5,6) is an internal wall cell; stepping right from (5,5) is blocked
    const int beside = state_of(5, 5, 0);
    CHECK(m.outcomes(beside, 3)[0].next == beside);
}

TEST_CASE("four-room layout errors") {
    FourRoomConfig on_wall = four_room_desk_config();
    on_wall.objects[0][0] = {6, 0};
    CHECK_THROWS_AS(build_four_room(on_wall), LayoutOverlapError);

    FourRoomConfig collide = four_room_desk_config();
    collide.objects[1][0] = collide.objects[0][0];
    CHECK_THROWS_AS(build_four_room(collide), LayoutOverlapError);

    FourRoomConfig off = four_room_desk_config();
    off.goal = {13, 0};
    CHECK_THROWS_AS(build_four_room(off), InvalidGridError);

    FourRoomConfig types = four_room_desk_config();
    types.objects.pop_back();
    CHECK_THROWS_AS(build_four_room(types), PreconditionError);
}

TEST_CASE("random momdp is reproducible and well formed") {
    const TabularMOMDP a = build_random_momdp(99, 6, 3, 2, 0.2, 0.9);
    const TabularMOMDP b = build_random_momdp(99, 6, 3, 2, 0.2, 0.9);
    CHECK_NOTHROW(validate_momdp(a));
    REQUIRE(a.num_states == b.num_states);
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
        REQUIRE(a.rows[r].size() == b.rows[r].size());
        for (std::size_t k = 0; k < a.rows[r].size(); ++k) {
            CHECK(a.rows[r][k].next == b.rows[r][k].next);
            CHECK(a.rows[r][k].prob == b.rows[r][k].prob);
            CHECK(a.rows[r][k].phi == b.rows[r][k].phi);
        }
    }
    const TabularMOMDP c = build_random_momdp(100, 6, 3, 2, 0.2, 0.9);
    bool differs = false;
    for (std::size_t r = 0; r < a.rows.size() && !differs; ++r)
        for (std::size_t k = 0; k < a.rows[r].size() && !differs; ++k)
            differs = a.rows[r][k].phi != c.rows[r][k].phi ||
                      a.rows[r][k].prob != c.rows[r][k].prob;
    CHECK(differs);
}

TEST_CASE("random momdp with terminal_prob one is all sinks") {
    const TabularMOMDP m = build_random_momdp(7, 4, 2, 3, 1.0, 0.9);
    for (int s = 0; s < m.num_states; ++s) CHECK(m.is_terminal(s));
    const auto res = value_iteration(m, Vector::Ones(3) / 3.0);
    CHECK(res.values.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("random momdp rejects bad arguments") {
    CHECK_THROWS_AS(build_random_momdp(1, 0, 2, 2, 0.1),
                    DimensionMismatchError);
    CHECK_THROWS_AS(build_random_momdp(1, 3, 2, 2, 1.5), PreconditionError);
    CHECK_THROWS_AS(build_random_momdp(1, 3, 2, 2, 0.1, 1.0),
                    PreconditionError);
}

TEST_CASE("toy model rows are exactly as advertised") {
    const TabularMOMDP m = make_toy3();
    const double phis[3][2] = {{1.0, 0.0}, {0.0, 1.0}, {0.75, 0.75}};
    for (int a = 0; a < 3; ++a) {
        const auto& outs = m.outcomes(0, a);
        REQUIRE(outs.size() == 1);
        CHECK(outs[0].next == 1);
        CHECK(outs[0].prob == 1.0);
        CHECK(outs[0].phi[0] == phis[a][0]);
        CHECK(outs[0].phi[1] == phis[a][1]);
    }
    CHECK(m.is_terminal(1));
    CHECK_FALSE(m.is_terminal(0));
}

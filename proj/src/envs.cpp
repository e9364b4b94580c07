#include "sfols/envs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "sfols/rng.hpp"

namespace sfols {

namespace {

constexpr int kRowDelta[4] = {-1, 1, 0, 0}; // up, down, left, right
constexpr int kColDelta[4] = {0, 0, -1, 1};

void absorbing_rows(TabularMOMDP& m, int s) {
    for (int a = 0; a < m.num_actions; ++a)
        m.outcomes(s, a) = {Outcome{s, 1.0, Vector::Zero(m.d)}};
}

} // namespace

TabularMOMDP build_dst(const DSTConfig& cfg) {
    if (cfg.rows < 1 || cfg.cols < 1)
        throw InvalidGridError("dst: grid must have positive dimensions");
    if (!(cfg.gamma >= 0.0 && cfg.gamma < 1.0))
        throw PreconditionError("dst: gamma must lie in [0, 1)");
    auto on_grid = [&](int r, int c) {
        return r >= 0 && r < cfg.rows && c >= 0 && c < cfg.cols;
    };
    if (!on_grid(cfg.start.first, cfg.start.second))
        throw InvalidGridError("dst: start cell outside the grid");

    std::map<std::pair<int, int>, double> value_at;
    for (const auto& t : cfg.treasures) {
        if (!on_grid(t.row, t.col))
            throw TreasureOutOfBoundsError(
                "dst: treasure at (" + std::to_string(t.row) + ", " +
                std::to_string(t.col) + ") lies outside the grid");
        if (!std::isfinite(t.value))
            throw PreconditionError("dst: treasure value must be finite");
        if (!value_at.emplace(std::make_pair(t.row, t.col), t.value).second)
            throw InvalidGridError("dst: two treasures share a cell");
    }
    if (value_at.count(cfg.start))
        throw InvalidGridError("dst: start cell may not hold a treasure");

    TabularMOMDP m;
    m.num_states = cfg.rows * cfg.cols;
    m.num_actions = 4;
    m.d = 2;
    m.gamma = cfg.gamma;
    m.initial_dist = Vector::Zero(m.num_states);
    m.initial_dist[cfg.start.first * cfg.cols + cfg.start.second] = 1.0;
    m.terminal.assign(m.num_states, 0);
    m.rows.resize(static_cast<std::size_t>(m.num_states) * 4);

    for (int r = 0; r < cfg.rows; ++r) {
        for (int c = 0; c < cfg.cols; ++c) {
            const int s = r * cfg.cols + c;
            if (value_at.count({r, c})) {
                m.terminal[s] = 1;
                absorbing_rows(m, s);
                continue;
            }
            for (int a = 0; a < 4; ++a) {
                int nr = r + kRowDelta[a];
                int nc = c + kColDelta[a];
                if (!on_grid(nr, nc)) {
                    nr = r;
                    nc = c;
                }
                Vector phi(2);
                auto it = value_at.find({nr, nc});
                phi[0] = (it != value_at.end()) ? it->second : 0.0;
                phi[1] = cfg.time_penalty;
                m.outcomes(s, a) = {Outcome{nr * cfg.cols + nc, 1.0, phi}};
            }
        }
    }
    validate_momdp(m);
    return m;
}

std::vector<std::pair<int, int>> default_four_room_walls(int size) {
    const int mid = size / 2;
    const int door_a = mid / 2;
    const int door_b = mid + (size - mid) / 2;
    std::vector<std::pair<int, int>> walls;
    for (int c = 0; c < size; ++c)
        if (c != door_a && c != door_b) walls.emplace_back(mid, c);
    for (int r = 0; r < size; ++r)
        if (r != door_a && r != door_b) walls.emplace_back(r, mid);
    return walls;
}

FourRoomConfig four_room_desk_config() {
    FourRoomConfig cfg;
    for (auto& instances : cfg.objects) instances.resize(2);
    return cfg;
}

TabularMOMDP build_four_room(const FourRoomConfig& cfg) {
    if (cfg.size < 3)
        throw InvalidGridError("four_room: grid too small");
    if (!(cfg.gamma >= 0.0 && cfg.gamma < 1.0))
        throw PreconditionError("four_room: gamma must lie in [0, 1)");
    if (cfg.objects.size() != 3)
        throw PreconditionError("four_room: exactly three object types "
                                "required");

    const int size = cfg.size;
    auto on_grid = [&](std::pair<int, int> p) {
        return p.first >= 0 && p.first < size && p.second >= 0 &&
               p.second < size;
    };

    const auto walls =
        cfg.walls.empty() ? default_four_room_walls(size) : cfg.walls;
    std::set<std::pair<int, int>> wall_set(walls.begin(), walls.end());
    for (const auto& w : walls)
        if (!on_grid(w)) throw InvalidGridError("four_room: wall off grid");

    // flat list of object instances; objects[k] are the cells of type k
    struct Instance {
        int type;
        std::pair<int, int> cell;
    };
    std::vector<Instance> instances;
    for (int k = 0; k < 3; ++k)
        for (const auto& cell : cfg.objects[k])
            instances.push_back({k, cell});
    const int n_obj = static_cast<int>(instances.size());
    if (n_obj > 20)
        throw PreconditionError("four_room: too many object instances");

    std::set<std::pair<int, int>> used;
    auto claim = [&](std::pair<int, int> cell, const char* what) {
        if (!on_grid(cell))
            throw InvalidGridError(std::string("four_room: ") + what +
                                   " off grid");
        if (wall_set.count(cell))
            throw LayoutOverlapError(std::string("four_room: ") + what +
                                     " placed on a wall");
        if (!used.insert(cell).second)
            throw LayoutOverlapError(std::string("four_room: ") + what +
                                     " overlaps another layout cell");
    };
    claim(cfg.start, "start");
    claim(cfg.goal, "goal");
    for (const auto& inst : instances) claim(inst.cell, "object");

    std::map<std::pair<int, int>, int> object_at; // cell -> instance index
    for (int j = 0; j < n_obj; ++j) object_at[instances[j].cell] = j;

    const int n_masks = 1 << n_obj;
    TabularMOMDP m;
    m.num_states = size * size * n_masks;
    m.num_actions = 4;
    m.d = 3;
    m.gamma = cfg.gamma;
    m.terminal.assign(m.num_states, 0);
    m.rows.resize(static_cast<std::size_t>(m.num_states) * 4);
    m.initial_dist = Vector::Zero(m.num_states);

    auto state_of = [&](int r, int c, int mask) {
        return (r * size + c) * n_masks + mask;
    };
    m.initial_dist[state_of(cfg.start.first, cfg.start.second, 0)] = 1.0;

    const int goal_cell_r = cfg.goal.first;
    const int goal_cell_c = cfg.goal.second;

    for (int r = 0; r < size; ++r) {
        for (int c = 0; c < size; ++c) {
            const bool is_wall = wall_set.count({r, c}) != 0;
            const bool is_goal = (r == goal_cell_r && c == goal_cell_c);
            for (int mask = 0; mask < n_masks; ++mask) {
                const int s = state_of(r, c, mask);
                if (is_wall || is_goal) {
                    m.terminal[s] = 1;
                    absorbing_rows(m, s);
                    continue;
                }
                for (int a = 0; a < 4; ++a) {
                    int nr = r + kRowDelta[a];
                    int nc = c + kColDelta[a];
                    if (nr < 0 || nr >= size || nc < 0 || nc >= size ||
                        wall_set.count({nr, nc})) {
                        nr = r;
                        nc = c;
                    }
                    Vector phi = Vector::Zero(3);
                    int nmask = mask;
                    if (nr == goal_cell_r && nc == goal_cell_c) {
                        phi = Vector::Ones(3);
                    } else {
                        auto it = object_at.find({nr, nc});
                        if (it != object_at.end() &&
                            (mask & (1 << it->second)) == 0) {
                            phi[instances[it->second].type] = 1.0;
                            nmask = mask | (1 << it->second);
                        }
                    }
                    m.outcomes(s, a) = {
                        Outcome{state_of(nr, nc, nmask), 1.0, phi}};
                }
            }
        }
    }
    validate_momdp(m);
    return m;
}

TabularMOMDP build_random_momdp(std::uint64_t seed, int num_states,
                                int num_actions, int d, double terminal_prob,
                                double gamma) {
    if (num_states < 1 || num_actions < 1 || d < 1)
        throw DimensionMismatchError("random momdp: sizes must be positive");
    if (terminal_prob < 0.0 || terminal_prob > 1.0)
        throw PreconditionError("random momdp: terminal_prob outside [0, 1]");
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw PreconditionError("random momdp: gamma must lie in [0, 1)");

    Rng flag_rng(seed, 0);
    Rng trans_rng(seed, 1);
    Rng feat_rng(seed, 2);

    TabularMOMDP m;
    m.num_states = num_states;
    m.num_actions = num_actions;
    m.d = d;
    m.gamma = gamma;
    m.initial_dist =
        Vector::Constant(num_states, 1.0 / static_cast<double>(num_states));
    m.terminal.resize(num_states);
    for (int s = 0; s < num_states; ++s)
        m.terminal[s] = flag_rng.bernoulli(terminal_prob) ? 1 : 0;
    m.rows.resize(static_cast<std::size_t>(num_states) * num_actions);

    for (int s = 0; s < num_states; ++s) {
        if (m.is_terminal(s)) {
            absorbing_rows(m, s);
            continue;
        }
        for (int a = 0; a < num_actions; ++a) {
            Vector probs = trans_rng.dirichlet_flat(num_states);
            auto& row = m.outcomes(s, a);
            row.reserve(num_states);
            for (int s2 = 0; s2 < num_states; ++s2) {
                Vector phi(d);
                for (int i = 0; i < d; ++i) phi[i] = feat_rng.uniform01();
                row.push_back(Outcome{s2, probs[s2], std::move(phi)});
            }
        }
    }
    validate_momdp(m);
    return m;
}

TabularMOMDP make_toy3() {
    TabularMOMDP m;
    m.num_states = 2; // decision state, terminal sink
    m.num_actions = 3;
    m.d = 2;
    m.gamma = 0.0;
    m.initial_dist = Vector::Zero(2);
    m.initial_dist[0] = 1.0;
    m.terminal = {0, 1};
    m.rows.resize(6);
    const double phis[3][2] = {{1.0, 0.0}, {0.0, 1.0}, {0.75, 0.75}};
    for (int a = 0; a < 3; ++a) {
        Vector phi(2);
        phi << phis[a][0], phis[a][1];
        m.outcomes(0, a) = {Outcome{1, 1.0, phi}};
        m.outcomes(1, a) = {Outcome{1, 1.0, Vector::Zero(2)}};
    }
    validate_momdp(m);
    return m;
}

} // namespace sfols

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sfols/errors.hpp"
#include "sfols/momdp.hpp"

namespace sfols {

class InvalidGridError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class TreasureOutOfBoundsError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class LayoutOverlapError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

// Grid actions, in tie-break order: up, down, left, right.
enum class GridAction { Up = 0, Down = 1, Left = 2, Right = 3 };

/**
 * Deep-sea-treasure gridworld. A submarine starts at `start` and moves in
 * the four cardinal directions; moves off the grid keep it in place.
 * Treasure cells are terminal. Features are two-dimensional: the first
 * component is the value of the treasure being entered (0 elsewhere), the
 * second is `time_penalty` on every step, including the collecting one.
 *
 * The default map places ten treasures whose values grow with their
 * distance from the start, chosen so all ten trade-offs are optimal for
 * some simplex weight.
 */
struct DSTConfig {
    struct Treasure {
        int row;
        int col;
        double value;
    };

    int rows = 10;
    int cols = 11;
    double gamma = 0.99;
    double time_penalty = -1.0;
    std::pair<int, int> start = {0, 0};
    std::vector<Treasure> treasures = {
        {1, 0, 0.7},  {2, 1, 8.2},   {3, 2, 11.5}, {4, 3, 14.0},
        {4, 4, 15.1}, {4, 5, 16.1},  {7, 6, 19.6}, {7, 7, 20.3},
        {9, 8, 22.4}, {9, 10, 23.7},
    };
};

TabularMOMDP build_dst(const DSTConfig& cfg);

/**
 * Four-room gridworld with collectible objects. Internal walls split the
 * grid into four rooms connected by doorways; bumping into a wall or the
 * border keeps the agent in place. There are three object types; entering
 * a cell with an uncollected instance of type k emits feature e_k and marks
 * it collected (the state tracks a pickup bitmask). Entering the goal emits
 * all three features and ends the episode.
 *
 * States enumerate every (cell, bitmask) pair, wall cells included; wall
 * states are unreachable and encoded as absorbing.
 */
struct FourRoomConfig {
    int size = 13;
    double gamma = 0.95;
    std::pair<int, int> start = {12, 0};
    std::pair<int, int> goal = {0, 12};
    // objects[type] lists the cells of that type's instances
    std::vector<std::vector<std::pair<int, int>>> objects = {
        {{2, 2}, {2, 10}, {10, 2}, {10, 10}},
        {{4, 4}, {4, 8}, {8, 4}, {8, 8}},
        {{1, 5}, {5, 1}, {11, 7}, {7, 11}},
    };
    // empty means: derive the standard two internal walls with four doorways
    std::vector<std::pair<int, int>> walls = {};
};

// The standard wall layout for a square grid: one wall along the middle row
// and one along the middle column, each pierced by two doorways.
std::vector<std::pair<int, int>> default_four_room_walls(int size);

// Smaller variant with two object instances per type (6 objects, 64 masks).
FourRoomConfig four_room_desk_config();

TabularMOMDP build_four_room(const FourRoomConfig& cfg);

/**
 * Seeded random MOMDP: each state is terminal with probability
 * terminal_prob; non-terminal rows draw their transition distribution from
 * a flat Dirichlet over all states and their features uniformly in [0,1]^d.
 * Terminal states use the canonical absorbing zero-feature encoding. The
 * initial distribution is uniform. Identical arguments produce an identical
 * MOMDP.
 */
TabularMOMDP build_random_momdp(std::uint64_t seed, int num_states,
                                int num_actions, int d, double terminal_prob,
                                double gamma = 0.95);

/**
 * One-step task with a single decision: three actions lead from the start
 * to a terminal state with features (1,0), (0,1) and (0.75, 0.75). The
 * first two actions are each optimal near their feature's simplex corner;
 * the third wins in the middle.
 */
TabularMOMDP make_toy3();

} // namespace sfols

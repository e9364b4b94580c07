#pragma once

#include <Eigen/Dense>
#include <vector>

namespace sfols {

using Vector = Eigen::VectorXd;
// Row-major so that per-(state,action) rows of SF tables are contiguous.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Deterministic stationary policy: one action index per state.
using PolicyTable = std::vector<int>;

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace sfols

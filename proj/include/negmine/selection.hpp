#pragma once

#include <vector>

#include <Eigen/Core>

#include "negmine/core_types.hpp"

namespace negmine {

/// Wild corpus ranked by local density, with the top-L subset split into B groups.
struct SelectionResult {
  std::vector<Index> order;          // corpus indices, decreasing representativeness
  Eigen::VectorXd rep_scores;        // indexed by corpus row
  std::vector<Index> selected;       // first L entries of `order`
  std::vector<std::vector<Index>> groups;  // corpus indices; B groups of floor(L/B)
};

inline constexpr double kRepDistanceFloor = 1e-12;

/// The alpha nearest rows of every row by squared Euclidean distance, self
/// excluded, ties broken by ascending index. Each list is sorted by distance.
std::vector<std::vector<Index>> nearest_neighbors(const EmbeddingMatrixd& corpus, Index alpha);

/// Rep(i) = -log(sum of squared distances to the alpha nearest rows), with
/// the sum floored at kRepDistanceFloor.
Eigen::VectorXd representativeness(const EmbeddingMatrixd& corpus, Index alpha);

/// Reorders by decreasing Rep (ties by ascending index), keeps the first
/// config.L and forms config.B equal-size groups. The L mod B remainder is dropped.
SelectionResult select_and_partition(const EmbeddingMatrixd& corpus, const ScoreConfig& config);

}  // namespace negmine

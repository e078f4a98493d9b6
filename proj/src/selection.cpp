#include "negmine/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "negmine/rng.hpp"

namespace negmine {

namespace {

constexpr Index kBlockRows = 512;

void check_knn_args(const EmbeddingMatrixd& corpus, Index alpha) {
  if (corpus.rows() < 2)
    throw Error(ErrorCode::TooFewRows, "representativeness needs at least 2 rows");
  if (alpha < 1 || alpha > corpus.rows() - 1)
    throw Error(ErrorCode::AlphaTooLarge, "alpha=" + std::to_string(alpha) + " with " +
                                              std::to_string(corpus.rows()) + " rows");
}

// Calls visit(i, neighbor_indices, squared_distances) for every row, working
// through the corpus in row blocks so the distance matrix is never materialized.
template <typename Visit>
void for_each_knn(const EmbeddingMatrixd& corpus, Index alpha, Visit&& visit) {
  const auto& Y = corpus.data();
  const Eigen::VectorXd sq = Y.rowwise().squaredNorm();
  const Index n = Y.rows();
  std::vector<Index> idx(static_cast<std::size_t>(n - 1));
  std::vector<double> dist(static_cast<std::size_t>(n));
  std::vector<Index> nbrs(static_cast<std::size_t>(alpha));
  std::vector<double> nd(static_cast<std::size_t>(alpha));

  for (Index start = 0; start < n; start += kBlockRows) {
    const Index len = std::min(kBlockRows, n - start);
    const Eigen::MatrixXd gram = Y.middleRows(start, len) * Y.transpose();
    for (Index r = 0; r < len; ++r) {
      const Index i = start + r;
      for (Index j = 0; j < n; ++j)
        dist[static_cast<std::size_t>(j)] = std::max(0.0, sq(i) + sq(j) - 2.0 * gram(r, j));
      std::size_t w = 0;
      for (Index j = 0; j < n; ++j)
        if (j != i) idx[w++] = j;
      auto closer = [&](Index a, Index b) {
        const double da = dist[static_cast<std::size_t>(a)], db = dist[static_cast<std::size_t>(b)];
        return da < db || (da == db && a < b);
      };
      std::partial_sort(idx.begin(), idx.begin() + alpha, idx.end(), closer);
      for (Index k = 0; k < alpha; ++k) {
        nbrs[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(k)];
        nd[static_cast<std::size_t>(k)] = dist[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
      }
      visit(i, nbrs, nd);
    }
  }
}

}  // namespace

std::vector<std::vector<Index>> nearest_neighbors(const EmbeddingMatrixd& corpus, Index alpha) {
  check_knn_args(corpus, alpha);
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(corpus.rows()));
  for_each_knn(corpus, alpha, [&](Index i, const std::vector<Index>& nbrs, const std::vector<double>&) {
    out[static_cast<std::size_t>(i)] = nbrs;
  });
  return out;
}

Eigen::VectorXd representativeness(const EmbeddingMatrixd& corpus, Index alpha) {
  check_knn_args(corpus, alpha);
  Eigen::VectorXd rep(corpus.rows());
  for_each_knn(corpus, alpha, [&](Index i, const std::vector<Index>&, const std::vector<double>& d) {
    const double total = std::accumulate(d.begin(), d.end(), 0.0);
    rep(i) = -std::log(std::max(total, kRepDistanceFloor));
  });
  return rep;
}

SelectionResult select_and_partition(const EmbeddingMatrixd& corpus, const ScoreConfig& config) {
  validate(config);
  if (config.L > corpus.rows())
    throw Error(ErrorCode::LNotAvailable, "L=" + std::to_string(config.L) + " but corpus has " +
                                              std::to_string(corpus.rows()) + " rows");
  SelectionResult result;
  result.rep_scores = representativeness(corpus, config.alpha);

  result.order.resize(static_cast<std::size_t>(corpus.rows()));
  std::iota(result.order.begin(), result.order.end(), Index{0});
  const auto& rep = result.rep_scores;
  std::stable_sort(result.order.begin(), result.order.end(),
                   [&](Index a, Index b) { return rep(a) > rep(b); });

  result.selected.assign(result.order.begin(), result.order.begin() + config.L);

  const Index group_size = config.L / config.B;
  std::vector<Index> pool = result.selected;
  if (config.grouping == GroupingMode::Random) {
    auto rng = make_stream(config.seed, Stream::Grouping);
    std::shuffle(pool.begin(), pool.end(), rng);
  }
  result.groups.assign(static_cast<std::size_t>(config.B), {});
  for (auto& g : result.groups) g.reserve(static_cast<std::size_t>(group_size));
  for (Index k = 0; k < config.B * group_size; ++k) {
    if (config.grouping == GroupingMode::RoundRobin)
      result.groups[static_cast<std::size_t>(k % config.B)].push_back(pool[static_cast<std::size_t>(k)]);
    else
      result.groups[static_cast<std::size_t>(k / group_size)].push_back(pool[static_cast<std::size_t>(k)]);
  }
  return result;
}

}  // namespace negmine

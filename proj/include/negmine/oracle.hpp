#pragma once

#include <Eigen/Core>

#include "negmine/core_types.hpp"
#include "negmine/rng.hpp"

namespace negmine {

inline constexpr Index kMaxOracleLabels = 8;
inline constexpr Index kMaxOracleTupleLength = 6;

/// A finite label space carrying the wild distribution Q, the positive
/// distribution P+ and the prior tau. The negative distribution is derived as
/// P- = (Q - tau P+) / (1 - tau) and must be a genuine distribution.
class DiscreteLabelSpace {
 public:
  /// `embeddings` may be empty when only affinities are used; otherwise it
  /// must have one row per weight.
  DiscreteLabelSpace(Eigen::VectorXd q_weights, Eigen::VectorXd pplus_weights, double tau,
                     EmbeddingMatrixd embeddings = {});

  /// Builds Q = tau P+ + (1 - tau) P- from the two components.
  static DiscreteLabelSpace from_components(const Eigen::VectorXd& pplus_weights,
                                            const Eigen::VectorXd& pminus_weights, double tau,
                                            EmbeddingMatrixd embeddings = {});

  Index size() const { return q_.size(); }
  double tau() const { return tau_; }
  const Eigen::VectorXd& q_weights() const { return q_; }
  const Eigen::VectorXd& pplus_weights() const { return pplus_; }
  const Eigen::VectorXd& pminus_weights() const { return pminus_; }
  const EmbeddingMatrixd& embeddings() const { return embeddings_; }

  /// kappa * <image, label_j> for every label.
  Eigen::VectorXd affinities(const Eigen::VectorXd& image, double kappa) const;

  /// Same space with rows (and their weights) reordered: row k of the result
  /// is row perm[k] of this space.
  DiscreteLabelSpace permuted(const std::vector<Index>& perm) const;

 private:
  Eigen::VectorXd q_, pplus_, pminus_;
  double tau_;
  EmbeddingMatrixd embeddings_;
};

/// Random space with `labels` unit-vector labels in `dim` dimensions and
/// Dirichlet(1) draws for P+ and P-.
DiscreteLabelSpace random_space(Index labels, Index dim, double tau, Rng& rng);

/// sum_j w_j e^{x_aff_j}
double expected_exp(const Eigen::VectorXd& weights, const Eigen::VectorXd& x_aff);

/// E_{y ~ P-}[e^{h(x, y)}]
double exact_neg_mean(const DiscreteLabelSpace& space, const Eigen::VectorXd& x_aff);

/// Expectation of phi over r i.i.d. negatives from P-, by enumerating all
/// size^r tuples.
double exact_unbiased_score(const DiscreteLabelSpace& space, const Eigen::VectorXd& x_aff,
                            const Eigen::VectorXd& id_aff, Index r, double lambda);

/// The same expectation written over Q and P+ only:
/// sum_k C(r,k) (-tau)^k / (1-tau)^r E[phi], first k negatives from P+, the
/// rest from Q.
double mixture_expansion_score(const DiscreteLabelSpace& space, const Eigen::VectorXd& x_aff,
                               const Eigen::VectorXd& id_aff, Index r, double lambda);

}  // namespace negmine

#pragma once

#include <vector>

#include <Eigen/Core>

#include "negmine/core_types.hpp"
#include "negmine/positive_synthesis.hpp"
#include "negmine/selection.hpp"

namespace negmine {

using AffinityRef = Eigen::Ref<const Eigen::VectorXd>;

/// Affinities of every test input against the three label banks. Rows are
/// test inputs. `groups` holds column indices into `wild_affinities`.
struct ScoringContext {
  RowMatrix<double> id_affinities;        // N x K, h(x, y_i)
  RowMatrix<double> wild_affinities;      // N x m, h(x, u_j) for the selected wild labels
  RowMatrix<double> positive_affinities;  // N x K, g(x, y_i); may be empty for MCM/NegLabel
  std::vector<std::vector<Index>> groups;
  ScoreConfig config;

  Index inputs() const { return id_affinities.rows(); }
};

/// `wild` holds the negative pool in column order; `groups` index its rows.
/// An empty `groups` means one group spanning the whole pool.
ScoringContext make_context(const EmbeddingMatrixd& images, const EmbeddingMatrixd& id_texts,
                            const EmbeddingMatrixd& wild, std::vector<std::vector<Index>> groups,
                            const PositiveBank* positives, const ScoreConfig& config);

/// Pool = selection.selected in rank order; groups remapped to pool columns.
ScoringContext make_context(const EmbeddingMatrixd& images, const EmbeddingMatrixd& id_texts,
                            const EmbeddingMatrixd& corpus, const SelectionResult& selection,
                            const PositiveBank* positives, const ScoreConfig& config);

/// Throws on shape mismatches, out-of-range or overlapping groups, or
/// affinities outside [-kappa, kappa].
void validate(const ScoringContext& ctx);

struct DebiasedScore {
  double score = 0.0;
  bool clamped = false;
};

struct GroupedScore {
  double score = 0.0;
  Index clamp_count = 0;
};

/// sum e^id / (sum e^id + (lambda / r) * sum e^neg), r = neg.size().
double phi(const AffinityRef& id_aff, const AffinityRef& neg_aff, double lambda);

/// Largest softmax probability over the ID affinities.
double score_mcm(const AffinityRef& id_aff);

/// Mean over groups of sum e^id / (sum e^id + sum_{group} e^wild).
double score_neglabel(const AffinityRef& id_aff, const AffinityRef& wild_aff,
                      const std::vector<std::vector<Index>>& groups);

/// A / (A + W) with A = (1 - tau) / lambda * sum e^id and
/// W = mean e^wild - tau * mean e^pos. W is clamped at config.mass_floor.
/// lambda is resolved from config for a pool of wild_aff.size() labels.
DebiasedScore score_debiased(const AffinityRef& id_aff, const AffinityRef& wild_aff,
                             const AffinityRef& pos_aff, const ScoreConfig& config);

/// Mean of score_debiased over the wild columns of each group, lambda
/// resolved per group.
GroupedScore score_grouped_debiased(const AffinityRef& id_aff, const AffinityRef& wild_aff,
                                    const AffinityRef& pos_aff,
                                    const std::vector<std::vector<Index>>& groups,
                                    const ScoreConfig& config);

/// The debiased ratio with the two expectations supplied directly:
/// wild_mean = E_Q[e^h], positive_mean = E_{P+}[e^h].
DebiasedScore score_debiased_from_means(const AffinityRef& id_aff, double wild_mean,
                                        double positive_mean, double tau, double lambda,
                                        double mass_floor);

/// sum e^id / (sum e^id + lambda * exact_neg_mean).
double score_asymptotic_unbiased(const AffinityRef& id_aff, double exact_neg_mean, double lambda);

enum class Decision { ID, OOD };

/// ID iff score >= beta.
inline Decision detect(double score, double beta) { return score >= beta ? Decision::ID : Decision::OOD; }

/// Scores every input with `method`. AsymptoticUnbiased needs exact negative
/// means and is not available here.
ScoreReport score(const ScoringContext& ctx, Method method);

}  // namespace negmine

#include "negmine/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "negmine/similarity.hpp"

namespace negmine {

namespace {

void require_nonempty(const AffinityRef& v, const char* what) {
  if (v.size() == 0) throw Error(ErrorCode::EmptyAffinities, std::string(what) + " is empty");
}

double max_of(std::initializer_list<const AffinityRef*> parts) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto* p : parts)
    if (p->size() > 0) m = std::max(m, p->maxCoeff());
  return m;
}

// Plain sequential sums: grouped and pooled paths must round identically.
double shifted_exp_sum(const AffinityRef& v, double shift) {
  double s = 0.0;
  for (Index c = 0; c < v.size(); ++c) s += std::exp(v(c) - shift);
  return s;
}

double shifted_exp_sum(const AffinityRef& v, const std::vector<Index>& cols, double shift) {
  double s = 0.0;
  for (Index c : cols) s += std::exp(v(c) - shift);
  return s;
}

// Debiased ratio on already shifted sums. Every mass is scaled by e^-shift,
// so the floor is scaled the same way before the comparison.
DebiasedScore debiased_ratio(double id_sum, double wild_mean, double pos_mean, double tau,
                             double lambda, double mass_floor, double shift) {
  const double a = (1.0 - tau) / lambda * id_sum;
  double w = wild_mean - tau * pos_mean;
  const double floor = std::exp(std::log(mass_floor) - shift);
  bool clamped = false;
  if (w <= floor) {
    w = floor;
    clamped = true;
  }
  return {a / (a + w), clamped};
}

void check_groups(const std::vector<std::vector<Index>>& groups, Index columns) {
  if (groups.empty()) throw Error(ErrorCode::EmptyGroups, "no groups");
  std::vector<char> seen(static_cast<std::size_t>(columns), 0);
  for (const auto& g : groups) {
    if (g.empty()) throw Error(ErrorCode::EmptyGroups, "a group is empty");
    for (Index c : g) {
      if (c < 0 || c >= columns)
        throw Error(ErrorCode::EmptyGroups, "group column " + std::to_string(c) + " out of range");
      if (seen[static_cast<std::size_t>(c)]++)
        throw Error(ErrorCode::EmptyGroups, "groups overlap at column " + std::to_string(c));
    }
  }
}

}  // namespace

double phi(const AffinityRef& id_aff, const AffinityRef& neg_aff, double lambda) {
  require_nonempty(id_aff, "ID affinities");
  require_nonempty(neg_aff, "negative affinities");
  const double shift = max_of({&id_aff, &neg_aff});
  const double s_id = shifted_exp_sum(id_aff, shift);
  const double s_neg = shifted_exp_sum(neg_aff, shift);
  return s_id / (s_id + lambda / static_cast<double>(neg_aff.size()) * s_neg);
}

double score_mcm(const AffinityRef& id_aff) {
  require_nonempty(id_aff, "ID affinities");
  return 1.0 / shifted_exp_sum(id_aff, id_aff.maxCoeff());
}

double score_neglabel(const AffinityRef& id_aff, const AffinityRef& wild_aff,
                      const std::vector<std::vector<Index>>& groups) {
  require_nonempty(id_aff, "ID affinities");
  check_groups(groups, wild_aff.size());
  const double shift = max_of({&id_aff, &wild_aff});
  const double s_id = shifted_exp_sum(id_aff, shift);
  double total = 0.0;
  for (const auto& g : groups) total += s_id / (s_id + shifted_exp_sum(wild_aff, g, shift));
  return total / static_cast<double>(groups.size());
}

DebiasedScore score_debiased(const AffinityRef& id_aff, const AffinityRef& wild_aff,
                             const AffinityRef& pos_aff, const ScoreConfig& config) {
  require_nonempty(id_aff, "ID affinities");
  require_nonempty(wild_aff, "wild affinities");
  require_nonempty(pos_aff, "positive affinities");
  const double shift = max_of({&id_aff, &wild_aff, &pos_aff});
  const auto m = static_cast<double>(wild_aff.size());
  const auto k = static_cast<double>(pos_aff.size());
  return debiased_ratio(shifted_exp_sum(id_aff, shift), shifted_exp_sum(wild_aff, shift) / m,
                        shifted_exp_sum(pos_aff, shift) / k, config.tau,
                        config.resolve_lambda(wild_aff.size()), config.mass_floor, shift);
}

GroupedScore score_grouped_debiased(const AffinityRef& id_aff, const AffinityRef& wild_aff,
                                    const AffinityRef& pos_aff,
                                    const std::vector<std::vector<Index>>& groups,
                                    const ScoreConfig& config) {
  require_nonempty(id_aff, "ID affinities");
  require_nonempty(pos_aff, "positive affinities");
  check_groups(groups, wild_aff.size());
  const double shift = max_of({&id_aff, &wild_aff, &pos_aff});
  const double s_id = shifted_exp_sum(id_aff, shift);
  const double pos_mean = shifted_exp_sum(pos_aff, shift) / static_cast<double>(pos_aff.size());
  GroupedScore out;
  for (const auto& g : groups) {
    const auto size = static_cast<Index>(g.size());
    const double wild_mean = shifted_exp_sum(wild_aff, g, shift) / static_cast<double>(size);
    const auto s = debiased_ratio(s_id, wild_mean, pos_mean, config.tau,
                                  config.resolve_lambda(size), config.mass_floor, shift);
    out.score += s.score;
    out.clamp_count += s.clamped ? 1 : 0;
  }
  out.score /= static_cast<double>(groups.size());
  return out;
}

DebiasedScore score_debiased_from_means(const AffinityRef& id_aff, double wild_mean,
                                        double positive_mean, double tau, double lambda,
                                        double mass_floor) {
  require_nonempty(id_aff, "ID affinities");
  return debiased_ratio(shifted_exp_sum(id_aff, 0.0), wild_mean, positive_mean, tau, lambda,
                        mass_floor, 0.0);
}

double score_asymptotic_unbiased(const AffinityRef& id_aff, double exact_neg_mean, double lambda) {
  require_nonempty(id_aff, "ID affinities");
  if (!(exact_neg_mean > 0.0))
    throw Error(ErrorCode::NonPositiveMean, "exact negative mean must be > 0");
  const double s_id = shifted_exp_sum(id_aff, 0.0);
  return s_id / (s_id + lambda * exact_neg_mean);
}

ScoringContext make_context(const EmbeddingMatrixd& images, const EmbeddingMatrixd& id_texts,
                            const EmbeddingMatrixd& wild, std::vector<std::vector<Index>> groups,
                            const PositiveBank* positives, const ScoreConfig& config) {
  validate(config);
  ScoringContext ctx;
  ctx.config = config;
  ctx.id_affinities = affinity_matrix(images, id_texts, config.kappa);
  ctx.wild_affinities = affinity_matrix(images, wild, config.kappa);
  if (positives) {
    if (positives->vectors.rows() != id_texts.rows())
      throw Error(ErrorCode::DimensionMismatch, "positive bank size differs from ID label count");
    ctx.positive_affinities = affinity_matrix(images, positives->vectors, config.kappa);
  }
  if (groups.empty()) {
    groups.emplace_back(static_cast<std::size_t>(wild.rows()));
    for (Index c = 0; c < wild.rows(); ++c) groups.front()[static_cast<std::size_t>(c)] = c;
  }
  ctx.groups = std::move(groups);
  validate(ctx);
  return ctx;
}

ScoringContext make_context(const EmbeddingMatrixd& images, const EmbeddingMatrixd& id_texts,
                            const EmbeddingMatrixd& corpus, const SelectionResult& selection,
                            const PositiveBank* positives, const ScoreConfig& config) {
  std::vector<Index> column_of(static_cast<std::size_t>(corpus.rows()), -1);
  for (std::size_t c = 0; c < selection.selected.size(); ++c)
    column_of[static_cast<std::size_t>(selection.selected[c])] = static_cast<Index>(c);
  std::vector<std::vector<Index>> groups;
  groups.reserve(selection.groups.size());
  for (const auto& g : selection.groups) {
    auto& cols = groups.emplace_back();
    for (Index corpus_index : g) cols.push_back(column_of[static_cast<std::size_t>(corpus_index)]);
  }
  return make_context(images, id_texts, corpus.gather(selection.selected), std::move(groups),
                      positives, config);
}

void validate(const ScoringContext& ctx) {
  validate(ctx.config);
  const Index n = ctx.inputs();
  if (ctx.wild_affinities.rows() != n)
    throw Error(ErrorCode::DimensionMismatch, "wild affinity rows differ from input count");
  if (ctx.positive_affinities.size() > 0 &&
      (ctx.positive_affinities.rows() != n ||
       ctx.positive_affinities.cols() != ctx.id_affinities.cols()))
    throw Error(ErrorCode::DimensionMismatch, "positive affinities must be N x K");
  check_groups(ctx.groups, ctx.wild_affinities.cols());
  const double limit = ctx.config.kappa + 1e-6;
  auto bounded = [limit](const RowMatrix<double>& m) {
    return m.size() == 0 || m.cwiseAbs().maxCoeff() <= limit;
  };
  if (!bounded(ctx.id_affinities) || !bounded(ctx.wild_affinities) ||
      !bounded(ctx.positive_affinities))
    throw Error(ErrorCode::InvalidConfig, "affinity magnitude exceeds kappa");
}

ScoreReport score(const ScoringContext& ctx, Method method) {
  ScoreReport report;
  report.method = method;
  report.config_echo = ctx.config;
  const Index n = ctx.inputs();
  report.scores.resize(n);

  const bool needs_positives = method == Method::Debiased || method == Method::GroupedDebiased;
  if (needs_positives && ctx.positive_affinities.size() == 0)
    throw Error(ErrorCode::EmptyAffinities, std::string(to_string(method)) + " needs positive affinities");
  if (method == Method::AsymptoticUnbiased)
    throw Error(ErrorCode::InvalidConfig, "asymptotic score needs exact negative means");

  for (Index i = 0; i < n; ++i) {
    const Eigen::VectorXd id = ctx.id_affinities.row(i).transpose();
    const Eigen::VectorXd wild = ctx.wild_affinities.row(i).transpose();
    switch (method) {
      case Method::MCM:
        report.scores(i) = score_mcm(id);
        break;
      case Method::NegLabel:
        report.scores(i) = score_neglabel(id, wild, ctx.groups);
        break;
      case Method::Debiased: {
        const auto s = score_debiased(id, wild, ctx.positive_affinities.row(i).transpose(), ctx.config);
        report.scores(i) = s.score;
        report.clamp_count += s.clamped ? 1 : 0;
        break;
      }
      case Method::GroupedDebiased: {
        const auto s = score_grouped_debiased(id, wild, ctx.positive_affinities.row(i).transpose(),
                                              ctx.groups, ctx.config);
        report.scores(i) = s.score;
        report.clamp_count += s.clamp_count;
        break;
      }
      case Method::AsymptoticUnbiased:
        break;
    }
  }
  return report;
}

}  // namespace negmine

#include "negmine/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace negmine {

namespace {

void require_scores(const Eigen::VectorXd& id_scores, const Eigen::VectorXd& ood_scores) {
  if (id_scores.size() == 0 || ood_scores.size() == 0)
    throw Error(ErrorCode::EmptyScores, "both score lists must be non-empty");
  if (!id_scores.allFinite() || !ood_scores.allFinite())
    throw Error(ErrorCode::EmptyScores, "scores must be finite");
}

// twice_u / (2 pairs), with the upper half written as 1 - complement. The
// complementary call then returns a and fl(1 - a), whose sum rounds to 1.
double twice_u_ratio(long long twice_u, long long pairs) {
  const auto total = 2.0 * static_cast<double>(pairs);
  if (twice_u <= pairs) return static_cast<double>(twice_u) / total;
  return 1.0 - static_cast<double>(2 * pairs - twice_u) / total;
}

}  // namespace

double auroc(const Eigen::VectorXd& id_scores, const Eigen::VectorXd& ood_scores) {
  require_scores(id_scores, ood_scores);
  std::vector<double> id(id_scores.begin(), id_scores.end());
  std::vector<double> ood(ood_scores.begin(), ood_scores.end());
  std::sort(id.begin(), id.end());
  std::sort(ood.begin(), ood.end());

  // Twice the Mann-Whitney U statistic, kept integral so that swapping the
  // two lists gives exactly the complementary count.
  long long twice_u = 0;
  std::size_t below = 0;  // ood scores strictly below the current id value
  std::size_t upto = 0;   // ood scores <= the current id value
  for (double s : id) {
    while (below < ood.size() && ood[below] < s) ++below;
    upto = std::max(upto, below);
    while (upto < ood.size() && ood[upto] <= s) ++upto;
    twice_u += 2 * static_cast<long long>(below) + static_cast<long long>(upto - below);
  }
  return twice_u_ratio(twice_u, static_cast<long long>(id.size()) * static_cast<long long>(ood.size()));
}

double auroc_pairwise(const Eigen::VectorXd& id_scores, const Eigen::VectorXd& ood_scores) {
  require_scores(id_scores, ood_scores);
  long long twice_u = 0;
  for (double a : id_scores)
    for (double b : ood_scores) twice_u += a > b ? 2 : (a == b ? 1 : 0);
  return twice_u_ratio(twice_u, static_cast<long long>(id_scores.size()) * ood_scores.size());
}

FprAtTpr fpr_at_tpr(const Eigen::VectorXd& id_scores, const Eigen::VectorXd& ood_scores,
                    double tpr_target) {
  require_scores(id_scores, ood_scores);
  if (!(tpr_target > 0.0 && tpr_target <= 1.0))
    throw Error(ErrorCode::InvalidConfig, "tpr_target must lie in (0, 1]");
  std::vector<double> id(id_scores.begin(), id_scores.end());
  std::sort(id.begin(), id.end(), std::greater<>());
  const auto n_id = static_cast<double>(id.size());
  // Smallest count of ID detections meeting the target. The slack absorbs
  // products like 0.95 * 20 landing a hair above an integer.
  auto needed = static_cast<std::size_t>(std::ceil(tpr_target * n_id - 1e-9));
  needed = std::clamp<std::size_t>(needed, 1, id.size());
  const double beta = id[needed - 1];
  const auto hits = std::count_if(ood_scores.begin(), ood_scores.end(), [beta](double s) { return s >= beta; });
  return {static_cast<double>(hits) / static_cast<double>(ood_scores.size()), beta};
}

EvalReport evaluate(const Eigen::VectorXd& id_scores, const Eigen::VectorXd& ood_scores,
                    double tpr_target) {
  EvalReport r;
  r.auroc = auroc(id_scores, ood_scores);
  const auto f = fpr_at_tpr(id_scores, ood_scores, tpr_target);
  r.fpr95 = f.fpr;
  r.threshold_beta = f.beta;
  r.tpr_target = tpr_target;
  r.n_id = id_scores.size();
  r.n_ood = ood_scores.size();
  return r;
}

nlohmann::json to_json(const EvalReport& r) {
  return {{"auroc", r.auroc},     {"fpr95", r.fpr95}, {"threshold_beta", r.threshold_beta},
          {"tpr_target", r.tpr_target}, {"n_id", r.n_id},   {"n_ood", r.n_ood}};
}

}  // namespace negmine

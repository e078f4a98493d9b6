#pragma once

#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "negmine/core_types.hpp"

namespace negmine {

struct EvalReport {
  double auroc = 0.0;
  double fpr95 = 0.0;
  double threshold_beta = 0.0;
  double tpr_target = 0.95;
  Index n_id = 0;
  Index n_ood = 0;
};

struct FprAtTpr {
  double fpr = 0.0;
  double beta = 0.0;
};

/// P(id > ood) + 0.5 P(id == ood), computed from a single sort of the pooled scores.
double auroc(const Eigen::VectorXd& id_scores, const Eigen::VectorXd& ood_scores);

/// Same quantity by comparing every (id, ood) pair. O(n_id * n_ood).
double auroc_pairwise(const Eigen::VectorXd& id_scores, const Eigen::VectorXd& ood_scores);

/// beta is the largest threshold with #{id >= beta} / n_id >= tpr_target;
/// fpr = #{ood >= beta} / n_ood.
FprAtTpr fpr_at_tpr(const Eigen::VectorXd& id_scores, const Eigen::VectorXd& ood_scores,
                    double tpr_target = 0.95);

EvalReport evaluate(const Eigen::VectorXd& id_scores, const Eigen::VectorXd& ood_scores,
                    double tpr_target = 0.95);

nlohmann::json to_json(const EvalReport& report);

}  // namespace negmine

#include <doctest.h>

#include <cmath>
#include <random>

#include "negmine/metrics.hpp"

using namespace negmine;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Scores on a coarse grid so that ties are common.
Eigen::VectorXd random_scores(std::mt19937_64& rng, bool coarse) {
  std::uniform_int_distribution<Index> len(1, 60);
  std::uniform_int_distribution<int> level(0, 9);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(len(rng));
  for (auto& x : v) x = coarse ? level(rng) / 10.0 : normal(rng);
  return v;
}

}  // namespace

TEST_CASE("AUROC examples") {
  CHECK(auroc(vec({1, 2}), vec({0})) == 1.0);
  CHECK(auroc(vec({1}), vec({1})) == 0.5);
  CHECK(auroc(vec({3, 1, 2}), vec({2, 3, 1})) == 0.5);
  CHECK(auroc(vec({0}), vec({1, 2})) == 0.0);
  CHECK_THROWS_WITH_AS(auroc(Eigen::VectorXd(), vec({1})), doctest::Contains("EmptyScores"), Error);
  CHECK_THROWS_AS(auroc_pairwise(vec({1}), Eigen::VectorXd()), Error);
}

TEST_CASE("sort-based AUROC equals the pairwise count") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 1000; ++t) {
    const bool coarse = t % 2 == 0;
    const Eigen::VectorXd id = random_scores(rng, coarse);
    const Eigen::VectorXd ood = random_scores(rng, coarse);
    CHECK(std::abs(auroc(id, ood) - auroc_pairwise(id, ood)) <= 1e-12);
  }
}

TEST_CASE("swapping the lists gives exactly the complement") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 1000; ++t) {
    const Eigen::VectorXd a = random_scores(rng, t % 2 == 0);
    const Eigen::VectorXd b = random_scores(rng, t % 2 == 0);
    CHECK(auroc(a, b) + auroc(b, a) == 1.0);
  }
}

TEST_CASE("AUROC is invariant under a strictly increasing map") {
  std::mt19937_64 rng(44);
  for (int t = 0; t < 100; ++t) {
    const Eigen::VectorXd id = random_scores(rng, true);
    const Eigen::VectorXd ood = random_scores(rng, true);
    const Eigen::VectorXd id2 = (id.array() * 3.0).exp() - 7.0;
    const Eigen::VectorXd ood2 = (ood.array() * 3.0).exp() - 7.0;
    CHECK(auroc(id2, ood2) == auroc(id, ood));
  }
}

TEST_CASE("FPR at TPR examples") {
  const Eigen::VectorXd id = vec({10, 9, 8, 7, 6, 5, 4, 3, 2, 1});
  const auto f = fpr_at_tpr(id, vec({0.5, 1.5}));
  CHECK(f.beta == 1.0);
  CHECK(f.fpr == 0.5);

  CHECK(fpr_at_tpr(id, vec({0.1, 0.2})).fpr == 0.0);
  CHECK(fpr_at_tpr(vec({0.3, 0.9, 0.6}), vec({0.0}), 1.0).beta == 0.3);

  // 20 values: 0.95 * 20 = 19 detections, beta is the 19th largest.
  Eigen::VectorXd twenty(20);
  for (Index i = 0; i < 20; ++i) twenty(i) = static_cast<double>(i + 1);
  CHECK(fpr_at_tpr(twenty, vec({1.5, 2.0, 2.5})).beta == 2.0);
  CHECK(fpr_at_tpr(twenty, vec({1.5, 2.0, 2.5})).fpr == doctest::Approx(2.0 / 3.0));

  CHECK_THROWS_AS(fpr_at_tpr(id, vec({0}), 0.0), Error);
  CHECK_THROWS_AS(fpr_at_tpr(id, vec({0}), 1.5), Error);
  CHECK_THROWS_AS(fpr_at_tpr(Eigen::VectorXd(), vec({0})), Error);
}

TEST_CASE("beta is attained by enough ID scores") {
  std::mt19937_64 rng(45);
  for (int t = 0; t < 200; ++t) {
    const Eigen::VectorXd id = random_scores(rng, t % 2 == 0);
    const Eigen::VectorXd ood = random_scores(rng, t % 2 == 0);
    const auto f = fpr_at_tpr(id, ood);
    const auto hits = (id.array() >= f.beta).count();
    CHECK(static_cast<double>(hits) >= std::ceil(0.95 * static_cast<double>(id.size()) - 1e-9));
    // No larger ID score would still meet the target.
    const auto above = (id.array() > f.beta).count();
    CHECK(static_cast<double>(above) < 0.95 * static_cast<double>(id.size()));
  }
}

TEST_CASE("raising OOD scores never lowers FPR") {
  std::mt19937_64 rng(46);
  std::uniform_real_distribution<double> bump(0.0, 0.3);
  for (int t = 0; t < 200; ++t) {
    const Eigen::VectorXd id = random_scores(rng, false);
    Eigen::VectorXd ood = random_scores(rng, false);
    const double before = fpr_at_tpr(id, ood).fpr;
    for (auto& x : ood) x += bump(rng);
    CHECK(fpr_at_tpr(id, ood).fpr >= before);
  }
}

TEST_CASE("evaluate and JSON") {
  const auto r = evaluate(vec({10, 9, 8, 7, 6, 5, 4, 3, 2, 1}), vec({0.5, 1.5}));
  CHECK(r.auroc == doctest::Approx(0.95));
  CHECK(r.fpr95 == 0.5);
  CHECK(r.threshold_beta == 1.0);
  CHECK(r.n_id == 10);
  CHECK(r.n_ood == 2);
  const auto j = to_json(r);
  CHECK(j.at("fpr95") == 0.5);
  CHECK(j.at("n_ood") == 2);
}

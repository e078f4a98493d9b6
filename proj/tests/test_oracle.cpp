#include <doctest.h>

#include <cmath>
#include <random>

#include "negmine/oracle.hpp"
#include "negmine/scoring.hpp"

using namespace negmine;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("space construction checks realizability") {
  CHECK_NOTHROW(DiscreteLabelSpace(vec({0.5, 0.5}), vec({1.0, 0.0}), 0.5));
  // Q puts less on label 0 than tau * P+ requires.
  CHECK_THROWS_WITH_AS(DiscreteLabelSpace(vec({0.2, 0.8}), vec({1.0, 0.0}), 0.5),
                       doctest::Contains("InvalidDistribution"), Error);
  CHECK_THROWS_AS(DiscreteLabelSpace(vec({0.5, 0.6}), vec({0.5, 0.5}), 0.5), Error);
  CHECK_THROWS_AS(DiscreteLabelSpace(vec({1.5, -0.5}), vec({0.5, 0.5}), 0.5), Error);
  CHECK_THROWS_AS(DiscreteLabelSpace(vec({0.5, 0.5}), vec({0.5, 0.5}), 1.0), Error);
  CHECK_THROWS_AS(DiscreteLabelSpace(vec({0.5, 0.5}), vec({1.0}), 0.5), Error);
  CHECK_THROWS_WITH_AS(DiscreteLabelSpace(Eigen::VectorXd::Constant(9, 1.0 / 9), Eigen::VectorXd::Constant(9, 1.0 / 9), 0.5),
                       doctest::Contains("EnumerationTooLarge"), Error);

  const auto s = DiscreteLabelSpace::from_components(vec({1.0, 0.0}), vec({0.25, 0.75}), 0.2);
  CHECK(s.q_weights()(0) == doctest::Approx(0.4));
  CHECK(s.pminus_weights()(1) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("exact negative mean examples") {
  const auto uniform = DiscreteLabelSpace::from_components(vec({0.5, 0.5}), vec({0.5, 0.5}), 0.3);
  CHECK(exact_neg_mean(uniform, vec({0, 0})) == doctest::Approx(1.0).epsilon(1e-15));

  const auto point = DiscreteLabelSpace::from_components(vec({0.5, 0.5}), vec({1.0, 0.0}), 0.3);
  CHECK(exact_neg_mean(point, vec({0.01, 0.3})) == doctest::Approx(std::exp(0.01)).epsilon(1e-14));

  const auto mixed = DiscreteLabelSpace::from_components(vec({1, 0, 0}), vec({0.2, 0.3, 0.5}), 0.4);
  CHECK(exact_neg_mean(mixed, vec({0.01, -0.02, 0.005})) ==
        doctest::Approx(0.9985758958385607).epsilon(1e-14));
}

TEST_CASE("exact unbiased score examples") {
  const auto uniform = DiscreteLabelSpace::from_components(vec({0.5, 0.5}), vec({0.5, 0.5}), 0.3);
  CHECK(exact_unbiased_score(uniform, vec({0, 0}), vec({0}), 1, 1.0) == doctest::Approx(0.5).epsilon(1e-15));

  const auto point = DiscreteLabelSpace::from_components(vec({0.5, 0.5}), vec({0.0, 1.0}), 0.3);
  const Eigen::VectorXd x = vec({0.1, -0.7});
  const Eigen::VectorXd id = vec({0.2, 0.4});
  CHECK(exact_unbiased_score(point, x, id, 2, 1.5) ==
        doctest::Approx(phi(id, vec({-0.7, -0.7}), 1.5)).epsilon(1e-14));

  CHECK_THROWS_WITH_AS(exact_unbiased_score(uniform, vec({0, 0}), vec({0}), 7, 1.0),
                       doctest::Contains("EnumerationTooLarge"), Error);
  CHECK_THROWS_AS(exact_unbiased_score(uniform, vec({0, 0}), vec({0}), 0, 1.0), Error);
  CHECK_THROWS_AS(exact_unbiased_score(uniform, vec({0}), vec({0}), 1, 1.0), Error);
}

TEST_CASE("exact unbiased score agrees with Monte Carlo") {
  const auto space = DiscreteLabelSpace::from_components(vec({0.6, 0.3, 0.1}), vec({0.1, 0.2, 0.7}), 0.3);
  const Eigen::VectorXd x = vec({0.9, -0.4, 0.3});
  const Eigen::VectorXd id = vec({0.5, -0.2});
  const double lambda = 2.0;
  const double exact = exact_unbiased_score(space, x, id, 2, lambda);

  std::mt19937_64 rng(99);
  const auto& w = space.pminus_weights();
  std::discrete_distribution<int> draw(w.data(), w.data() + w.size());
  constexpr int kDraws = 1000000;
  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < kDraws; ++t) {
    const double v = phi(id, vec({x(draw(rng)), x(draw(rng))}), lambda);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / kDraws;
  const double se = std::sqrt((sum_sq / kDraws - mean * mean) / kDraws);
  CHECK(std::abs(mean - exact) <= 3.0 * se);
}

TEST_CASE("mixture expansion examples") {
  auto rng = make_stream(3, Stream::OracleSpaces);
  // With tau = 0 only the k = 0 term survives: plain enumeration under Q.
  const auto zero = random_space(4, 6, 0.0, rng);
  Eigen::VectorXd x = zero.affinities(Eigen::VectorXd::Unit(6, 0), 1.0);
  const Eigen::VectorXd id = vec({0.3, -0.1});
  const DiscreteLabelSpace q_only(zero.q_weights(), zero.q_weights(), 0.0);
  CHECK(mixture_expansion_score(zero, x, id, 3, 3.0) ==
        doctest::Approx(exact_unbiased_score(q_only, x, id, 3, 3.0)).epsilon(1e-14));

  // r = 1 by hand: (E_Q[phi] - tau E_P+[phi]) / (1 - tau).
  const auto space = random_space(5, 6, 0.4, rng);
  x = space.affinities(Eigen::VectorXd::Unit(6, 1), 1.0);
  double eq = 0.0, ep = 0.0;
  for (Index j = 0; j < 5; ++j) {
    const double p = phi(id, vec({x(j)}), 1.0);
    eq += space.q_weights()(j) * p;
    ep += space.pplus_weights()(j) * p;
  }
  CHECK(mixture_expansion_score(space, x, id, 1, 1.0) == doctest::Approx((eq - 0.4 * ep) / 0.6).epsilon(1e-13));
}

TEST_CASE("mixture expansion equals direct enumeration") {
  auto rng = make_stream(17, Stream::OracleSpaces);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int s = 0; s < 40; ++s) {
    const double tau = s % 2 ? 0.2 : 0.5;
    const auto space = random_space(2 + s % 5, 8, tau, rng);
    Eigen::VectorXd probe(8);
    for (Index k = 0; k < 8; ++k) probe(k) = normal(rng);
    const Eigen::VectorXd x = space.affinities(probe.normalized(), 1.0);
    const Eigen::VectorXd id = vec({normal(rng) * 0.5, normal(rng) * 0.5});
    for (Index r = 1; r <= 3; ++r) {
      const double direct = exact_unbiased_score(space, x, id, r, static_cast<double>(r));
      const double expanded = mixture_expansion_score(space, x, id, r, static_cast<double>(r));
      CHECK(std::abs(direct - expanded) <= 1e-10);
    }
  }
}

TEST_CASE("exact unbiased score is invariant under relabeling") {
  auto rng = make_stream(23, Stream::OracleSpaces);
  const auto space = random_space(5, 8, 0.3, rng);
  const Eigen::VectorXd probe = Eigen::VectorXd::Unit(8, 2);
  const Eigen::VectorXd id = vec({0.1, 0.2, -0.3});
  const std::vector<Index> perm{3, 0, 4, 1, 2};
  const auto shuffled = space.permuted(perm);
  for (Index r = 1; r <= 3; ++r) {
    CHECK(exact_unbiased_score(shuffled, shuffled.affinities(probe, 1.0), id, r, 1.0) ==
          doctest::Approx(exact_unbiased_score(space, space.affinities(probe, 1.0), id, r, 1.0)).epsilon(1e-13));
  }
}

TEST_CASE("finite-r score approaches the asymptotic score") {
  auto rng = make_stream(5, Stream::OracleSpaces);
  const auto space = random_space(4, 16, 0.5, rng);
  const Eigen::VectorXd probe = Eigen::VectorXd::Unit(16, 0);
  const Eigen::VectorXd x = space.affinities(probe, 0.01);
  const Eigen::VectorXd id = vec({0.004, -0.002, 0.001});
  const double limit = score_asymptotic_unbiased(id, exact_neg_mean(space, x), 1.0);
  double previous = std::numeric_limits<double>::infinity();
  for (Index r = 1; r <= 6; ++r) {
    const double gap = std::abs(exact_unbiased_score(space, x, id, r, 1.0) - limit);
    CHECK(gap <= previous);
    previous = gap;
  }
  CHECK(previous <= 1e-3);
}

TEST_CASE("mixture-form debiased score equals the exact negative-mean score") {
  auto rng = make_stream(31, Stream::OracleSpaces);
  for (int s = 0; s < 30; ++s) {
    const double tau = 0.1 + 0.8 * (s % 5) / 4.0;
    const auto space = random_space(6, 8, tau, rng);
    const Eigen::VectorXd x = space.affinities(Eigen::VectorXd::Unit(8, s % 8), 1.0);
    const Eigen::VectorXd id = vec({0.2, -0.4, 0.1});
    const double lambda = 1.0 + s;
    const auto mixed = score_debiased_from_means(id, expected_exp(space.q_weights(), x),
                                                 expected_exp(space.pplus_weights(), x), tau, lambda, 1e-12);
    CHECK_FALSE(mixed.clamped);
    CHECK(std::abs(mixed.score - score_asymptotic_unbiased(id, exact_neg_mean(space, x), lambda)) <= 1e-10);
  }
}

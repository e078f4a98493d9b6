#include "negmine/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "negmine/scoring.hpp"

namespace negmine {

double bias_bound(double kappa, double tau, Index m, Index n) {
  const double c = std::numbers::pi * std::exp(3.0 * kappa) / 2.0;
  return std::sqrt(c / static_cast<double>(m)) / (1.0 - tau) +
         tau / (1.0 - tau) * std::sqrt(c / static_cast<double>(n));
}

std::vector<long long> multinomial_counts(long long draws, const Eigen::VectorXd& weights,
                                          Rng& rng) {
  std::vector<long long> counts(static_cast<std::size_t>(weights.size()), 0);
  double mass_left = weights.sum();
  long long left = draws;
  for (Index j = 0; j + 1 < weights.size() && left > 0; ++j) {
    const double p = mass_left > 0.0 ? std::clamp(weights(j) / mass_left, 0.0, 1.0) : 0.0;
    std::binomial_distribution<long long> binom(left, p);
    const long long c = binom(rng);
    counts[static_cast<std::size_t>(j)] = c;
    left -= c;
    mass_left -= weights(j);
  }
  if (weights.size() > 0) counts.back() += left;
  return counts;
}

double sample_delta(const DiscreteLabelSpace& space, const Eigen::VectorXd& x_aff,
                    const Eigen::VectorXd& id_aff, Index m, Index n, double lambda, Rng& rng,
                    double mass_floor) {
  if (m < 1 || n < 1) throw Error(ErrorCode::InvalidConfig, "m and n must be >= 1");
  if (x_aff.size() != space.size())
    throw Error(ErrorCode::DimensionMismatch, "one affinity per label is required");

  // The sample means only depend on how often each label was drawn.
  const auto wild = multinomial_counts(m, space.q_weights(), rng);
  const auto pos = multinomial_counts(n, space.pplus_weights(), rng);
  double wild_sum = 0.0, pos_sum = 0.0;
  for (Index j = 0; j < space.size(); ++j) {
    const double e = std::exp(x_aff(j));
    wild_sum += static_cast<double>(wild[static_cast<std::size_t>(j)]) * e;
    pos_sum += static_cast<double>(pos[static_cast<std::size_t>(j)]) * e;
  }
  const double debiased =
      score_debiased_from_means(id_aff, wild_sum / static_cast<double>(m),
                                pos_sum / static_cast<double>(n), space.tau(), lambda, mass_floor)
          .score;
  const double unbiased = score_asymptotic_unbiased(id_aff, exact_neg_mean(space, x_aff), lambda);
  return std::abs(std::log(unbiased) - std::log(debiased));
}

BiasExperimentReport run_bias_experiment(const DiscreteLabelSpace& space,
                                         const Eigen::VectorXd& x_aff,
                                         const Eigen::VectorXd& id_aff,
                                         const BiasExperimentConfig& config) {
  if (config.grid.empty()) throw Error(ErrorCode::InvalidConfig, "empty sample-size grid");
  if (config.trials < 100)
    throw Error(ErrorCode::InsufficientTrials, std::to_string(config.trials) + " < 100 trials");

  BiasExperimentReport report;
  report.grid = config.grid;
  report.trials = config.trials;
  report.kappa = config.kappa;
  report.tau = space.tau();
  report.lambda = config.lambda;

  for (std::size_t g = 0; g < config.grid.size(); ++g) {
    const auto [m, n] = config.grid[g];
    double sum = 0.0, sum_sq = 0.0;
    for (Index t = 0; t < config.trials; ++t) {
      auto rng = make_stream(config.seed, Stream::BiasTrials,
                             (static_cast<std::uint64_t>(g) << 32) | static_cast<std::uint64_t>(t));
      const double d = sample_delta(space, x_aff, id_aff, m, n, config.lambda, rng, config.mass_floor);
      sum += d;
      sum_sq += d * d;
    }
    const auto trials = static_cast<double>(config.trials);
    const double mean = sum / trials;
    const double var = std::max(0.0, (sum_sq - trials * mean * mean) / (trials - 1.0));
    report.mean_delta.push_back(mean);
    report.std_error.push_back(std::sqrt(var / trials));
    report.bound.push_back(bias_bound(config.kappa, space.tau(), m, n));
  }

  Index n_max = 0;
  for (const auto& p : config.grid) n_max = std::max(n_max, p.n);
  std::vector<double> xs, ys;
  for (std::size_t g = 0; g < config.grid.size(); ++g) {
    if (config.grid[g].n != n_max || !(report.mean_delta[g] > 0.0)) continue;
    xs.push_back(std::log(static_cast<double>(config.grid[g].m)));
    ys.push_back(std::log(report.mean_delta[g]));
  }
  if (xs.size() >= 2) {
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      sxy += (xs[k] - mx) * (ys[k] - my);
      sxx += (xs[k] - mx) * (xs[k] - mx);
    }
    if (sxx > 0.0) report.slope_m = sxy / sxx;
  }
  return report;
}

BiasScenario make_bias_scenario(Index labels, Index id_labels, Index dim, double kappa, double tau,
                                std::uint64_t seed) {
  auto rng = make_stream(seed, Stream::OracleSpaces);
  auto space = random_space(labels, dim, tau, rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto unit = [&] {
    Eigen::VectorXd v(dim);
    for (Index k = 0; k < dim; ++k) v(k) = normal(rng);
    return Eigen::VectorXd(v.normalized());
  };
  const Eigen::VectorXd probe = unit();
  Eigen::VectorXd id_aff(id_labels);
  for (Index i = 0; i < id_labels; ++i) id_aff(i) = kappa * probe.dot(unit());
  Eigen::VectorXd x_aff = space.affinities(probe, kappa);
  return BiasScenario{std::move(space), std::move(x_aff), std::move(id_aff)};
}

ExpansionCheck run_expansion_check(std::uint64_t seed, Index spaces) {
  auto rng = make_stream(seed, Stream::OracleSpaces, 1);
  std::uniform_int_distribution<Index> label_count(2, 6);
  std::uniform_int_distribution<Index> tuple_length(1, 3);
  std::normal_distribution<double> normal(0.0, 1.0);
  constexpr double kTaus[] = {0.2, 0.5};
  constexpr Index kDim = 8;

  ExpansionCheck out;
  out.spaces = spaces;
  for (Index s = 0; s < spaces; ++s) {
    const double tau = kTaus[s % 2];
    const auto space = random_space(label_count(rng), kDim, tau, rng);
    Eigen::VectorXd probe(kDim);
    for (Index k = 0; k < kDim; ++k) probe(k) = normal(rng);
    probe.normalize();
    // kappa = 1 keeps phi visibly non-constant across tuples.
    const Eigen::VectorXd x_aff = space.affinities(probe, 1.0);
    Eigen::VectorXd id_aff(3);
    for (Index i = 0; i < id_aff.size(); ++i) id_aff(i) = std::tanh(normal(rng));
    const Index r = tuple_length(rng);
    const double lambda = static_cast<double>(r);
    const double direct = exact_unbiased_score(space, x_aff, id_aff, r, lambda);
    const double expanded = mixture_expansion_score(space, x_aff, id_aff, r, lambda);
    out.max_abs_deviation = std::max(out.max_abs_deviation, std::abs(direct - expanded));
  }
  return out;
}

nlohmann::json to_json(const BiasExperimentReport& r) {
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& p : r.grid) grid.push_back({{"m", p.m}, {"n", p.n}});
  nlohmann::json j{{"grid", grid},          {"mean_delta", r.mean_delta},
                   {"std_error", r.std_error}, {"bound", r.bound},
                   {"trials", r.trials},    {"kappa", r.kappa},
                   {"tau", r.tau},          {"lambda", r.lambda}};
  j["slope_m"] = r.slope_m ? nlohmann::json(*r.slope_m) : nlohmann::json(nullptr);
  return j;
}

}  // namespace negmine

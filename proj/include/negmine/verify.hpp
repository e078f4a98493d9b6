#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "negmine/oracle.hpp"
#include "negmine/rng.hpp"

namespace negmine {

struct SampleSizes {
  Index m = 0;  // wild draws from Q
  Index n = 0;  // positive draws from P+
};

struct BiasExperimentConfig {
  std::vector<SampleSizes> grid;
  Index trials = 1000;
  double lambda = 1.0;
  double kappa = 0.01;  // only enters the bound
  std::uint64_t seed = 0;
  double mass_floor = 1e-12;
};

struct BiasExperimentReport {
  std::vector<SampleSizes> grid;
  std::vector<double> mean_delta;
  std::vector<double> std_error;
  std::vector<double> bound;
  std::optional<double> slope_m;  // log-log slope of mean_delta in m at the largest n
  Index trials = 0;
  double kappa = 0.0;
  double tau = 0.0;
  double lambda = 0.0;
};

/// (1/(1-tau)) sqrt(pi e^{3 kappa} / 2m) + (tau/(1-tau)) sqrt(pi e^{3 kappa} / 2n)
double bias_bound(double kappa, double tau, Index m, Index n);

/// Counts of `draws` i.i.d. categorical samples with probabilities `weights`.
std::vector<long long> multinomial_counts(long long draws, const Eigen::VectorXd& weights, Rng& rng);

/// |log S_unbiased - log S_debiased| for one draw of m wild and n positive
/// samples. S_unbiased uses the exact negative mean; S_debiased replaces the
/// two expectations with sample means.
double sample_delta(const DiscreteLabelSpace& space, const Eigen::VectorXd& x_aff,
                    const Eigen::VectorXd& id_aff, Index m, Index n, double lambda, Rng& rng,
                    double mass_floor = 1e-12);

/// Averages sample_delta over config.trials per grid point. Trial t at grid
/// point g draws from stream (seed, BiasTrials, g << 32 | t).
BiasExperimentReport run_bias_experiment(const DiscreteLabelSpace& space,
                                         const Eigen::VectorXd& x_aff,
                                         const Eigen::VectorXd& id_aff,
                                         const BiasExperimentConfig& config);

/// A seeded space together with one probe input: `x_aff` are the probe's
/// affinities to the space labels and `id_aff` to `id_labels` random ID labels.
struct BiasScenario {
  DiscreteLabelSpace space;
  Eigen::VectorXd x_aff;
  Eigen::VectorXd id_aff;
};

BiasScenario make_bias_scenario(Index labels, Index id_labels, Index dim, double kappa, double tau,
                                std::uint64_t seed);

/// Largest |enumerated expectation over P- - expansion over Q and P+| across
/// `spaces` random valid spaces (2..6 labels, r in 1..3, tau in {0.2, 0.5}).
struct ExpansionCheck {
  Index spaces = 0;
  double max_abs_deviation = 0.0;
};

ExpansionCheck run_expansion_check(std::uint64_t seed, Index spaces = 50);

nlohmann::json to_json(const BiasExperimentReport& report);

}  // namespace negmine

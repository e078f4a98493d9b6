#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

#include "negmine/core_types.hpp"
#include "negmine/rng.hpp"

namespace negmine {

/// Synthetic positive-label embeddings, one per ID label.
struct PositiveBank {
  EmbeddingMatrixd vectors;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// l2(z + sigma * eps), eps ~ N(0, I). Always consumes one eps draw so the
/// generator advances identically for every sigma; sigma == 0 returns z as is.
template <typename Derived, typename Generator>
Eigen::VectorXd perturb(const Eigen::MatrixBase<Derived>& z, double sigma, Generator& rng) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::InvalidConfig, "sigma must be >= 0");
  Eigen::VectorXd base(z.size());
  for (Index k = 0; k < z.size(); ++k) base(k) = static_cast<double>(z.derived().coeff(k));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int attempt = 0; attempt < 2; ++attempt) {
    Eigen::VectorXd eps(base.size());
    for (Index k = 0; k < eps.size(); ++k) eps(k) = normal(rng);
    if (sigma == 0.0) return base;
    Eigen::VectorXd v = base + sigma * eps;
    const double norm = v.norm();
    if (norm > 0.0 && std::isfinite(norm)) return v / norm;
  }
  throw Error(ErrorCode::ZeroNormResult, "perturbation cancelled the input twice");
}

/// Applies perturb to every row in order from the Positives stream of `seed`.
inline PositiveBank synthesize_bank(const EmbeddingMatrixd& id_texts, double sigma,
                                    std::uint64_t seed) {
  require_valid(id_texts, "ID text embeddings");
  auto rng = make_stream(seed, Stream::Positives);
  RowMatrix<double> out(id_texts.rows(), id_texts.dim());
  for (Index i = 0; i < id_texts.rows(); ++i) out.row(i) = perturb(id_texts.row(i), sigma, rng).transpose();
  return PositiveBank{EmbeddingMatrixd(std::move(out), id_texts.labels()), sigma, seed};
}

}  // namespace negmine

#include "negmine/oracle.hpp"

#include <cmath>
#include <random>

#include "negmine/similarity.hpp"

namespace negmine {

namespace {

constexpr double kWeightTolerance = 1e-12;

void check_distribution(const Eigen::VectorXd& w, const char* name) {
  if (w.size() == 0) throw Error(ErrorCode::InvalidDistribution, std::string(name) + " is empty");
  if ((w.array() < 0.0).any() || !w.allFinite())
    throw Error(ErrorCode::InvalidDistribution, std::string(name) + " has a negative weight");
  if (std::abs(w.sum() - 1.0) > kWeightTolerance)
    throw Error(ErrorCode::InvalidDistribution,
                std::string(name) + " sums to " + std::to_string(w.sum()));
}

void check_enumeration(const DiscreteLabelSpace& space, const Eigen::VectorXd& x_aff,
                       const Eigen::VectorXd& id_aff, Index r) {
  if (r < 1 || r > kMaxOracleTupleLength)
    throw Error(ErrorCode::EnumerationTooLarge,
                "tuple length " + std::to_string(r) + " outside [1, 6]");
  if (x_aff.size() != space.size())
    throw Error(ErrorCode::DimensionMismatch, "one affinity per label is required");
  if (id_aff.size() == 0) throw Error(ErrorCode::EmptyAffinities, "ID affinities are empty");
}

// E[phi] with position p drawn from *weights[p], by nested enumeration. Each
// level accumulates its own weighted sum, so the rounding error stays at the
// depth of the recursion rather than the number of tuples.
class TupleExpectation {
 public:
  TupleExpectation(const Eigen::VectorXd& x_aff, const Eigen::VectorXd& id_aff, double lambda,
                   std::vector<const Eigen::VectorXd*> weights)
      : exp_neg_(x_aff.array().exp()),
        id_sum_(id_aff.array().exp().sum()),
        scale_(lambda / static_cast<double>(weights.size())),
        weights_(std::move(weights)) {}

  double run() const { return level(0, 0.0); }

 private:
  double level(std::size_t depth, double neg_sum) const {
    if (depth == weights_.size()) return id_sum_ / (id_sum_ + scale_ * neg_sum);
    const auto& w = *weights_[depth];
    double acc = 0.0;
    for (Index j = 0; j < w.size(); ++j) {
      if (w(j) == 0.0) continue;
      acc += w(j) * level(depth + 1, neg_sum + exp_neg_(j));
    }
    return acc;
  }

  Eigen::VectorXd exp_neg_;
  double id_sum_;
  double scale_;
  std::vector<const Eigen::VectorXd*> weights_;
};

}  // namespace

DiscreteLabelSpace::DiscreteLabelSpace(Eigen::VectorXd q_weights, Eigen::VectorXd pplus_weights,
                                       double tau, EmbeddingMatrixd embeddings)
    : q_(std::move(q_weights)),
      pplus_(std::move(pplus_weights)),
      tau_(tau),
      embeddings_(std::move(embeddings)) {
  if (q_.size() > kMaxOracleLabels)
    throw Error(ErrorCode::EnumerationTooLarge,
                std::to_string(q_.size()) + " labels exceed the oracle limit of 8");
  if (pplus_.size() != q_.size())
    throw Error(ErrorCode::DimensionMismatch, "Q and P+ have different supports");
  if (!(tau_ >= 0.0 && tau_ < 1.0))
    throw Error(ErrorCode::InvalidDistribution, "tau must lie in [0, 1)");
  check_distribution(q_, "Q");
  check_distribution(pplus_, "P+");
  if (embeddings_.rows() != 0) {
    if (embeddings_.rows() != q_.size())
      throw Error(ErrorCode::DimensionMismatch, "embedding count differs from label count");
    require_valid(embeddings_, "label space embeddings");
  }
  pminus_ = (q_ - tau_ * pplus_) / (1.0 - tau_);
  if (pminus_.minCoeff() < -kWeightTolerance)
    throw Error(ErrorCode::InvalidDistribution,
                "Q - tau P+ is negative; the mixture is not realizable");
  pminus_ = pminus_.cwiseMax(0.0);
}

DiscreteLabelSpace DiscreteLabelSpace::from_components(const Eigen::VectorXd& pplus_weights,
                                                       const Eigen::VectorXd& pminus_weights,
                                                       double tau, EmbeddingMatrixd embeddings) {
  if (pplus_weights.size() != pminus_weights.size())
    throw Error(ErrorCode::DimensionMismatch, "P+ and P- have different supports");
  check_distribution(pminus_weights, "P-");
  return DiscreteLabelSpace(tau * pplus_weights + (1.0 - tau) * pminus_weights, pplus_weights, tau,
                            std::move(embeddings));
}

Eigen::VectorXd DiscreteLabelSpace::affinities(const Eigen::VectorXd& image, double kappa) const {
  if (embeddings_.rows() == 0)
    throw Error(ErrorCode::EmptyMatrix, "label space has no embeddings");
  Eigen::VectorXd out(size());
  for (Index j = 0; j < size(); ++j) out(j) = affinity(image, embeddings_.row(j), kappa);
  return out;
}

DiscreteLabelSpace DiscreteLabelSpace::permuted(const std::vector<Index>& perm) const {
  Eigen::VectorXd q(size()), p(size());
  for (Index k = 0; k < size(); ++k) {
    q(k) = q_(perm[static_cast<std::size_t>(k)]);
    p(k) = pplus_(perm[static_cast<std::size_t>(k)]);
  }
  EmbeddingMatrixd emb = embeddings_.rows() ? embeddings_.gather(perm) : EmbeddingMatrixd{};
  return DiscreteLabelSpace(q, p, tau_, std::move(emb));
}

DiscreteLabelSpace random_space(Index labels, Index dim, double tau, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  RowMatrix<double> emb(labels, dim);
  for (Index i = 0; i < labels; ++i) {
    for (Index k = 0; k < dim; ++k) emb(i, k) = normal(rng);
    emb.row(i).normalize();
  }
  auto dirichlet = [&] {
    Eigen::VectorXd w(labels);
    for (Index i = 0; i < labels; ++i) w(i) = expo(rng);
    return Eigen::VectorXd(w / w.sum());
  };
  const Eigen::VectorXd pplus = dirichlet();
  const Eigen::VectorXd pminus = dirichlet();
  Eigen::VectorXd q = tau * pplus + (1.0 - tau) * pminus;
  q /= q.sum();
  return DiscreteLabelSpace(q, pplus, tau, EmbeddingMatrixd(std::move(emb)));
}

double expected_exp(const Eigen::VectorXd& weights, const Eigen::VectorXd& x_aff) {
  if (weights.size() != x_aff.size())
    throw Error(ErrorCode::DimensionMismatch, "one affinity per label is required");
  double s = 0.0;
  for (Index j = 0; j < weights.size(); ++j) s += weights(j) * std::exp(x_aff(j));
  return s;
}

double exact_neg_mean(const DiscreteLabelSpace& space, const Eigen::VectorXd& x_aff) {
  return expected_exp(space.pminus_weights(), x_aff);
}

double exact_unbiased_score(const DiscreteLabelSpace& space, const Eigen::VectorXd& x_aff,
                            const Eigen::VectorXd& id_aff, Index r, double lambda) {
  check_enumeration(space, x_aff, id_aff, r);
  std::vector<const Eigen::VectorXd*> weights(static_cast<std::size_t>(r), &space.pminus_weights());
  return TupleExpectation(x_aff, id_aff, lambda, std::move(weights)).run();
}

double mixture_expansion_score(const DiscreteLabelSpace& space, const Eigen::VectorXd& x_aff,
                               const Eigen::VectorXd& id_aff, Index r, double lambda) {
  check_enumeration(space, x_aff, id_aff, r);
  const double tau = space.tau();
  const double denom = std::pow(1.0 - tau, static_cast<double>(r));
  double total = 0.0;
  double binom = 1.0;  // C(r, k)
  for (Index k = 0; k <= r; ++k) {
    if (k > 0) binom = binom * static_cast<double>(r - k + 1) / static_cast<double>(k);
    const double coeff = binom * std::pow(-tau, static_cast<double>(k)) / denom;
    if (coeff == 0.0) continue;
    std::vector<const Eigen::VectorXd*> weights;
    for (Index p = 0; p < r; ++p) weights.push_back(p < k ? &space.pplus_weights() : &space.q_weights());
    total += coeff * TupleExpectation(x_aff, id_aff, lambda, std::move(weights)).run();
  }
  return total;
}

}  // namespace negmine

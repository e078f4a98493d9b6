#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace negmine {

using Index = Eigen::Index;

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Error codes shared by every module. Each throwing operation reports one of these.
enum class ErrorCode {
  NonUnitRow,
  LabelCountMismatch,
  EmptyMatrix,
  DimensionMismatch,
  AlphaTooLarge,
  TooFewRows,
  LNotAvailable,
  InvalidConfig,
  ZeroNormResult,
  EmptyAffinities,
  EmptyGroups,
  NonPositiveMean,
  EnumerationTooLarge,
  InvalidDistribution,
  InsufficientTrials,
  InfeasibleSeparation,
  EmptyScores,
  Io,
  Format,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Row-major bank of d-dimensional vectors on the unit hypersphere, with an
/// optional label per row. Immutable once constructed. Construction does not
/// validate; call validate() or require_valid() on anything read from outside.
template <typename Scalar>
class EmbeddingMatrix {
 public:
  using Storage = RowMatrix<Scalar>;

  EmbeddingMatrix() = default;
  explicit EmbeddingMatrix(Storage data, std::vector<std::string> labels = {})
      : data_(std::move(data)), labels_(std::move(labels)) {}

  Index rows() const { return data_.rows(); }
  Index dim() const { return data_.cols(); }
  const Storage& data() const { return data_; }
  auto row(Index i) const { return data_.row(i); }

  bool has_labels() const { return !labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Rows `indices` in the given order; labels follow their rows.
  EmbeddingMatrix gather(const std::vector<Index>& indices) const {
    Storage out(static_cast<Index>(indices.size()), dim());
    std::vector<std::string> out_labels;
    if (has_labels()) out_labels.reserve(indices.size());
    for (std::size_t k = 0; k < indices.size(); ++k) {
      out.row(static_cast<Index>(k)) = data_.row(indices[k]);
      if (has_labels()) out_labels.push_back(labels_[static_cast<std::size_t>(indices[k])]);
    }
    return EmbeddingMatrix(std::move(out), std::move(out_labels));
  }

  template <typename Other>
  EmbeddingMatrix<Other> cast() const {
    return EmbeddingMatrix<Other>(data_.template cast<Other>(), labels_);
  }

 private:
  Storage data_;
  std::vector<std::string> labels_;
};

using EmbeddingMatrixd = EmbeddingMatrix<double>;
using EmbeddingMatrixf = EmbeddingMatrix<float>;

inline constexpr double kUnitNormTolerance = 1e-4;

struct Violation {
  ErrorCode kind;  // NonUnitRow, LabelCountMismatch or EmptyMatrix
  Index row = -1;
  double norm = 0.0;
  std::string message;
};

/// Empty when the matrix is valid, otherwise the first violated invariant.
using ValidationOutcome = std::optional<Violation>;

template <typename Scalar>
ValidationOutcome validate(const EmbeddingMatrix<Scalar>& m) {
  if (m.rows() < 1 || m.dim() < 2) {
    return Violation{ErrorCode::EmptyMatrix, -1, 0.0,
                     "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.dim()) +
                         ", need rows >= 1 and dim >= 2"};
  }
  if (m.has_labels() && static_cast<Index>(m.labels().size()) != m.rows()) {
    return Violation{ErrorCode::LabelCountMismatch, -1, 0.0,
                     std::to_string(m.labels().size()) + " labels for " + std::to_string(m.rows()) +
                         " rows"};
  }
  for (Index i = 0; i < m.rows(); ++i) {
    const double norm = m.row(i).template cast<double>().norm();
    if (!(std::abs(norm - 1.0) <= kUnitNormTolerance)) {
      return Violation{ErrorCode::NonUnitRow, i, norm,
                       "row " + std::to_string(i) + " has norm " + std::to_string(norm)};
    }
  }
  return std::nullopt;
}

template <typename Scalar>
void require_valid(const EmbeddingMatrix<Scalar>& m, const std::string& what = "embedding matrix") {
  if (auto v = validate(m)) throw Error(v->kind, what + ": " + v->message);
}

enum class LambdaMode { GroupSize, Fixed };
enum class GroupingMode { RoundRobin, Random };

struct ScoreConfig {
  double kappa = 0.01;
  double tau = 0.5;
  double sigma = 0.001;
  Index L = 12000;
  Index B = 100;
  Index alpha = 100;
  LambdaMode lambda_mode = LambdaMode::GroupSize;
  double lambda_value = 1.0;  // used only when lambda_mode == Fixed
  double mass_floor = 1e-12;
  std::uint64_t seed = 0;
  GroupingMode grouping = GroupingMode::RoundRobin;

  /// λ for a negative pool of `pool_size` labels.
  double resolve_lambda(Index pool_size) const {
    return lambda_mode == LambdaMode::GroupSize ? static_cast<double>(pool_size) : lambda_value;
  }
};

/// Throws InvalidConfig naming the first violated constraint.
void validate(const ScoreConfig& config);

enum class Method { MCM, NegLabel, Debiased, GroupedDebiased, AsymptoticUnbiased };

const char* to_string(Method method);
Method method_from_string(const std::string& name);

struct ScoreReport {
  Method method = Method::GroupedDebiased;
  Eigen::VectorXd scores;
  Index clamp_count = 0;
  ScoreConfig config_echo;
};

}  // namespace negmine

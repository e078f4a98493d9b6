#pragma once

#include <Eigen/Core>

#include "negmine/core_types.hpp"

namespace negmine {

/// h(x, y) = kappa * <x, y>, accumulated in double.
template <typename DerivedA, typename DerivedB>
double affinity(const Eigen::MatrixBase<DerivedA>& image, const Eigen::MatrixBase<DerivedB>& text,
                double kappa) {
  if (image.size() != text.size())
    throw Error(ErrorCode::DimensionMismatch, "affinity: dims " + std::to_string(image.size()) +
                                                  " vs " + std::to_string(text.size()));
  double dot = 0.0;
  for (Index k = 0; k < image.size(); ++k)
    dot += static_cast<double>(image.derived().coeff(k)) * static_cast<double>(text.derived().coeff(k));
  return kappa * dot;
}

/// Entry (i, j) is affinity(images.row(i), texts.row(j), kappa).
template <typename Scalar>
Eigen::MatrixXd affinity_matrix(const EmbeddingMatrix<Scalar>& images,
                                const EmbeddingMatrix<Scalar>& texts, double kappa) {
  if (images.dim() != texts.dim())
    throw Error(ErrorCode::DimensionMismatch, "affinity_matrix: dims " +
                                                  std::to_string(images.dim()) + " vs " +
                                                  std::to_string(texts.dim()));
  Eigen::MatrixXd dots =
      images.data().template cast<double>() * texts.data().template cast<double>().transpose();
  return kappa * dots;
}

}  // namespace negmine

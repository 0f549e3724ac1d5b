#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "sge/error.hpp"

namespace sge {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
/// Row-major dense matrix; rows are points.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// n observations in d dimensions, optionally labeled.
///
/// Invariants (checked on construction): n >= 1, d >= 1, every entry finite,
/// labels (when present) have exactly n entries.
class PointCloud {
 public:
  explicit PointCloud(RowMatrix points, std::optional<std::vector<int>> labels = std::nullopt);

  Index size() const noexcept { return points_.rows(); }
  Index dim() const noexcept { return points_.cols(); }

  const RowMatrix& points() const noexcept { return points_; }
  const std::optional<std::vector<int>>& labels() const noexcept { return labels_; }
  bool has_labels() const noexcept { return labels_.has_value(); }

  /// Rows `rows` in the given order (labels follow).
  PointCloud subset(std::span<const Index> rows) const;

  bool operator==(const PointCloud& other) const;

 private:
  RowMatrix points_;
  std::optional<std::vector<int>> labels_;
};

/// Squared Euclidean distance between rows, accumulated in coordinate order.
inline double squared_distance(const RowMatrix& a, Index i, const RowMatrix& b, Index j) {
  const double* x = a.data() + i * a.cols();
  const double* y = b.data() + j * b.cols();
  double acc = 0.0;
  for (Index k = 0; k < a.cols(); ++k) {
    const double t = x[k] - y[k];
    acc += t * t;
  }
  return acc;
}

inline double distance(const RowMatrix& a, Index i, const RowMatrix& b, Index j) {
  return std::sqrt(squared_distance(a, i, b, j));
}

}  // namespace sge

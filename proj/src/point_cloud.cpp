#include "sge/point_cloud.hpp"

#include <cmath>
#include <string>

namespace sge {

PointCloud::PointCloud(RowMatrix points, std::optional<std::vector<int>> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw InvalidArgument("point cloud must have at least one point and one dimension (got " +
                          std::to_string(points_.rows()) + "x" + std::to_string(points_.cols()) +
                          ")");
  }
  if (!points_.allFinite()) throw InvalidArgument("point cloud contains non-finite entries");
  if (labels_ && static_cast<Index>(labels_->size()) != points_.rows()) {
    throw InvalidArgument("label count " + std::to_string(labels_->size()) +
                          " does not match point count " + std::to_string(points_.rows()));
  }
}

PointCloud PointCloud::subset(std::span<const Index> rows) const {
  RowMatrix out(static_cast<Index>(rows.size()), dim());
  std::optional<std::vector<int>> out_labels;
  if (labels_) out_labels.emplace();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Index r = rows[k];
    if (r < 0 || r >= size()) throw InvalidArgument("subset row out of range");
    out.row(static_cast<Index>(k)) = points_.row(r);
    if (labels_) out_labels->push_back((*labels_)[static_cast<std::size_t>(r)]);
  }
  return PointCloud(std::move(out), std::move(out_labels));
}

bool PointCloud::operator==(const PointCloud& other) const {
  return points_.rows() == other.points_.rows() && points_.cols() == other.points_.cols() &&
         points_ == other.points_ && labels_ == other.labels_;
}

}  // namespace sge

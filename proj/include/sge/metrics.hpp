#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "sge/point_cloud.hpp"

namespace sge {

struct ErrorReport {
  enum class Kind { mad, adjacency };
  Kind kind = Kind::mad;
  double value = 0.0;
  std::string method;
  nlohmann::json params = nlohmann::json::object();
  std::optional<std::uint64_t> seed;

  nlohmann::json to_json() const;
};

/// Arc lengths r * angle(row_i, row_j) on a sphere of nominal radius r. Rows
/// are normalised first, so points off the sphere use their direction only.
/// Requires d == 3 and nonzero rows.
Matrix great_circle_dists(const PointCloud& cloud, double r);

/// Unsquared Euclidean distances between all rows.
Matrix pairwise_euclidean(const PointCloud& cloud);

/// Mean of |ref - emb| over the strictly upper triangle.
double mad(const Matrix& ref, const Matrix& emb);

/// Distance-weighted kNN adjacency of each cloud (union graph, own distances),
/// summed |A - A~| over ordered pairs, divided by n * delta.
double adjacency_error(const PointCloud& orig, const PointCloud& emb, Index delta);

}  // namespace sge

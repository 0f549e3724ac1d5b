#include "sge/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "sge/graph.hpp"

namespace sge {

nlohmann::json ErrorReport::to_json() const {
  nlohmann::json j;
  j["kind"] = kind == Kind::mad ? "mad" : "adjacency";
  j["value"] = value;
  j["method"] = method;
  j["params"] = params;
  j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
  return j;
}

Matrix great_circle_dists(const PointCloud& cloud, double r) {
  if (cloud.dim() != 3) throw InvalidArgument("great_circle_dists needs 3-D points");
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("radius must be positive and finite");
  const Index n = cloud.size();
  RowMatrix unit = cloud.points();
  for (Index i = 0; i < n; ++i) {
    const double norm = unit.row(i).norm();
    if (norm == 0.0) throw InvalidArgument("row " + std::to_string(i) + " has zero norm");
    unit.row(i) /= norm;
  }
  Matrix out = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double c = std::clamp(unit.row(i).dot(unit.row(j)), -1.0, 1.0);
      out(i, j) = out(j, i) = r * std::acos(c);
    }
  }
  return out;
}

Matrix pairwise_euclidean(const PointCloud& cloud) {
  const Index n = cloud.size();
  const auto& pts = cloud.points();
  Matrix out = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) out(i, j) = out(j, i) = distance(pts, i, pts, j);
  }
  return out;
}

double mad(const Matrix& ref, const Matrix& emb) {
  if (ref.rows() != ref.cols() || emb.rows() != emb.cols() || ref.rows() != emb.rows()) {
    throw InvalidArgument("mad needs two square matrices of the same size");
  }
  const Index n = ref.rows();
  if (n < 2) return 0.0;
  double sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) sum += std::abs(ref(i, j) - emb(i, j));
  }
  return 2.0 * sum / (static_cast<double>(n) * static_cast<double>(n - 1));
}

double adjacency_error(const PointCloud& orig, const PointCloud& emb, Index delta) {
  const Index n = orig.size();
  if (emb.size() != n) {
    throw InvalidArgument("adjacency_error: point counts differ (" + std::to_string(n) + " vs " +
                          std::to_string(emb.size()) + ")");
  }
  const NeighborGraph a = build_graph(orig, knn(orig, delta));
  const NeighborGraph b = build_graph(emb, knn(emb, delta));

  // Walk both sorted edge lists; each unordered pair counts twice.
  const auto& ea = a.edges();
  const auto& eb = b.edges();
  const auto key = [](const Edge& e) { return std::pair(e.i, e.j); };
  double sum = 0.0;
  std::size_t x = 0, y = 0;
  while (x < ea.size() || y < eb.size()) {
    if (y == eb.size() || (x < ea.size() && key(ea[x]) < key(eb[y]))) {
      sum += ea[x++].weight;
    } else if (x == ea.size() || key(eb[y]) < key(ea[x])) {
      sum += eb[y++].weight;
    } else {
      sum += std::abs(ea[x++].weight - eb[y++].weight);
    }
  }
  return 2.0 * sum / (static_cast<double>(n) * static_cast<double>(delta));
}

}  // namespace sge

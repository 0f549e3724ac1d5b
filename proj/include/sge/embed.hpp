#pragma once

#include <array>
#include <string>
#include <vector>

#include "json.hpp"
#include "sge/point_cloud.hpp"

namespace sge {

struct SgeParams {
  Index delta = 3;
  double mu_s = 1.0;
  double nu = 10.0;  ///< percent
  Index h = 100;
  Index p = 2;
  /// Skip spline fitting and use geodesic distances (reproduces Isomap).
  bool fallback_only = false;
  /// Embed only the largest graph component instead of failing on disconnection.
  bool largest_component = false;

  void validate(Index n) const;
};

/// Squared distances: symmetric, zero diagonal, nonnegative, finite.
struct DistanceMatrix {
  Matrix squared;
};

/// Doubly centred matrix; rows and columns sum to zero.
struct GramMatrix {
  Matrix values;
};

struct Embedding {
  RowMatrix coords;        ///< n x p
  Vector singular_values;  ///< p values, nonincreasing
  /// Share of the retained singular values whose directions carry a negative
  /// eigenvalue of the Gram matrix (0 for Euclidean input).
  double negative_energy_fraction = 0.0;

  PointCloud as_cloud(std::optional<std::vector<int>> labels = std::nullopt) const {
    return PointCloud(coords, std::move(labels));
  }
};

struct EmbedDiagnostics {
  std::string method;
  /// Neighbor count of the graph stage (0 for MDS).
  Index delta = 0;
  /// Pair counts by accepted spline degree: index 0 is the geodesic fallback.
  std::array<std::size_t, 4> degree_histogram{};
  /// Largest ratio length / (d_G (100 + nu) / 100) over pairs; <= 1 always.
  double max_cap_ratio = 0.0;
  /// Input rows that were embedded, in output order.
  std::vector<Index> kept;
  double wall_time_ms = 0.0;
};

struct EmbedResult {
  Embedding embedding;
  EmbedDiagnostics diagnostics;
};

DistanceMatrix pairwise_sq_euclidean(const PointCloud& cloud);

/// s_ij = -1/2 (d_ij - rowmean_i - colmean_j + mean), computed on the upper
/// triangle and mirrored.
GramMatrix double_center(const DistanceMatrix& d);

/// Top-p singular triples of the symmetric Gram matrix; row i of coords is
/// u_i * sqrt(sigma). Each axis is flipped so its largest-magnitude entry is
/// positive (first such entry on ties).
Embedding svd_embed(const GramMatrix& s, Index p);

/// Squared lengths -> double centring -> SVD embedding.
Embedding embed_lengths(const Matrix& lengths, Index p);

EmbedResult run_mds(const PointCloud& cloud, Index p);
/// Throws DisconnectedGraphError unless `largest_component` is set.
EmbedResult run_isomap(const PointCloud& cloud, Index delta, Index p, bool largest_component = false);
EmbedResult run_sge(const PointCloud& cloud, const SgeParams& params);

Embedding mds(const PointCloud& cloud, Index p);
Embedding isomap(const PointCloud& cloud, Index delta, Index p);
Embedding sge(const PointCloud& cloud, const SgeParams& params);

/// Diagnostics JSON: method, params, singular_values, degree_histogram,
/// negative_energy_fraction, wall_time_ms (plus kept rows when restricted).
nlohmann::json diagnostics_json(const EmbedResult& result, const nlohmann::json& params);

}  // namespace sge

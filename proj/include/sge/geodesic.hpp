#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "sge/graph.hpp"

namespace sge {

inline constexpr std::int32_t kNoHop = -1;

/// All-pairs shortest-path lengths with a next-hop matrix for path recovery.
/// Unreachable pairs hold +infinity and kNoHop.
struct GeodesicTable {
  RowMatrix dist;
  Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> next;

  Index size() const noexcept { return dist.rows(); }
  bool reachable(Index i, Index j) const { return next(i, j) != kNoHop; }
};

/// Shortest path [i = v_1, ..., v_m = j] and its edge-weight sum.
struct GeodesicPath {
  std::vector<Index> indices;
  double length = 0.0;

  Index m() const noexcept { return static_cast<Index>(indices.size()); }
};

/// Floyd-Warshall. A relaxation through k replaces the current entry only when
/// strictly shorter, so the first shortest path found is kept.
GeodesicTable floyd_apsp(const NeighborGraph& g);

/// Follows the next-hop chain. Throws InvalidArgument for i == j and
/// NoPathError for unreachable pairs.
GeodesicPath extract_path(const GeodesicTable& t, Index i, Index j);

/// Number of nodes on the i -> j path (1 for i == j, 0 when unreachable).
Index path_point_count(const GeodesicTable& t, Index i, Index j);

}  // namespace sge

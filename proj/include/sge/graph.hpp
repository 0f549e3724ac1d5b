#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "sge/point_cloud.hpp"

namespace sge {

/// For each point, its `delta` nearest neighbors ordered by (distance, index).
struct NeighborLists {
  Index delta = 0;
  std::vector<std::vector<Index>> lists;

  Index size() const noexcept { return static_cast<Index>(lists.size()); }
  const std::vector<Index>& operator[](Index i) const { return lists[static_cast<std::size_t>(i)]; }
};

struct Edge {
  Index i;  ///< always i < j
  Index j;
  double weight;  ///< Euclidean distance, not squared

  bool operator==(const Edge&) const = default;
};

/// Undirected simple graph on nodes 0..n-1. Edges are unique and sorted by (i, j).
class NeighborGraph {
 public:
  NeighborGraph() = default;
  /// Edges may arrive in any order and either orientation; duplicates of the
  /// same unordered pair keep the first weight seen. Self loops are rejected.
  NeighborGraph(Index n, std::vector<Edge> edges);

  Index size() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  Index degree(Index v) const { return static_cast<Index>(adjacency_[static_cast<std::size_t>(v)].size()); }
  /// Neighbors of v with weights, sorted by neighbor index.
  const std::vector<std::pair<Index, double>>& neighbors(Index v) const {
    return adjacency_[static_cast<std::size_t>(v)];
  }
  bool has_edge(Index a, Index b) const;

  /// Graph induced on `nodes` (new index k corresponds to nodes[k]).
  NeighborGraph induced(std::span<const Index> nodes) const;

 private:
  Index n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<Index, double>>> adjacency_;
};

/// Exact brute-force delta nearest neighbors; ties go to the smaller index.
NeighborLists knn(const PointCloud& cloud, Index delta);

/// Union-symmetrised kNN graph: {i, j} is an edge when either selects the other.
NeighborGraph build_graph(const PointCloud& cloud, const NeighborLists& nbrs);

/// Components sorted ascending internally, listed by smallest member.
std::vector<std::vector<Index>> connected_components(const NeighborGraph& g);

/// Debug export, one `i j w` line per edge sorted by (i, j).
void write_edge_list(const NeighborGraph& g, std::ostream& out);

}  // namespace sge

#include "sge/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>

#include "sge/parallel.hpp"

namespace sge {

NeighborGraph::NeighborGraph(Index n, std::vector<Edge> edges) : n_(n) {
  if (n < 0) throw InvalidArgument("graph size must be >= 0");
  for (auto& e : edges) {
    if (e.i == e.j) throw InvalidArgument("self loop at node " + std::to_string(e.i));
    if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n) throw InvalidArgument("edge endpoint out of range");
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const Edge& a, const Edge& b) { return a.i == b.i && a.j == b.j; }),
              edges.end());
  edges_ = std::move(edges);

  adjacency_.assign(static_cast<std::size_t>(n), {});
  for (const auto& e : edges_) {
    adjacency_[static_cast<std::size_t>(e.i)].emplace_back(e.j, e.weight);
    adjacency_[static_cast<std::size_t>(e.j)].emplace_back(e.i, e.weight);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

bool NeighborGraph::has_edge(Index a, Index b) const {
  const auto& adj = adjacency_[static_cast<std::size_t>(a)];
  auto it = std::lower_bound(adj.begin(), adj.end(), b,
                             [](const std::pair<Index, double>& p, Index v) { return p.first < v; });
  return it != adj.end() && it->first == b;
}

NeighborGraph NeighborGraph::induced(std::span<const Index> nodes) const {
  std::vector<Index> relabel(static_cast<std::size_t>(n_), -1);
  for (std::size_t k = 0; k < nodes.size(); ++k) relabel[static_cast<std::size_t>(nodes[k])] = static_cast<Index>(k);
  std::vector<Edge> kept;
  for (const auto& e : edges_) {
    const Index a = relabel[static_cast<std::size_t>(e.i)];
    const Index b = relabel[static_cast<std::size_t>(e.j)];
    if (a >= 0 && b >= 0) kept.push_back({a, b, e.weight});
  }
  return NeighborGraph(static_cast<Index>(nodes.size()), std::move(kept));
}

NeighborLists knn(const PointCloud& cloud, Index delta) {
  const Index n = cloud.size();
  if (delta < 1 || delta > n - 1) {
    throw InvalidArgument("delta must lie in [1, n-1]; got delta = " + std::to_string(delta) +
                          " with n = " + std::to_string(n));
  }
  const auto& pts = cloud.points();
  NeighborLists out;
  out.delta = delta;
  out.lists.resize(static_cast<std::size_t>(n));

  parallel_for(static_cast<std::size_t>(n), [&](std::size_t row) {
    const Index i = static_cast<Index>(row);
    std::vector<std::pair<double, Index>> cand;
    cand.reserve(static_cast<std::size_t>(n - 1));
    for (Index j = 0; j < n; ++j) {
      if (j != i) cand.emplace_back(squared_distance(pts, i, pts, j), j);
    }
    std::partial_sort(cand.begin(), cand.begin() + delta, cand.end());
    auto& list = out.lists[row];
    list.reserve(static_cast<std::size_t>(delta));
    for (Index k = 0; k < delta; ++k) list.push_back(cand[static_cast<std::size_t>(k)].second);
  });
  return out;
}

NeighborGraph build_graph(const PointCloud& cloud, const NeighborLists& nbrs) {
  if (nbrs.size() != cloud.size()) throw InvalidArgument("neighbor lists do not match cloud size");
  const auto& pts = cloud.points();
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(cloud.size() * nbrs.delta));
  for (Index i = 0; i < nbrs.size(); ++i) {
    for (Index j : nbrs[i]) {
      const Index a = std::min(i, j), b = std::max(i, j);
      edges.push_back({a, b, distance(pts, a, pts, b)});
    }
  }
  return NeighborGraph(cloud.size(), std::move(edges));
}

std::vector<std::vector<Index>> connected_components(const NeighborGraph& g) {
  const Index n = g.size();
  std::vector<Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      auto& p = parent[static_cast<std::size_t>(v)];
      p = parent[static_cast<std::size_t>(p)];
      v = p;
    }
    return v;
  };
  for (const auto& e : g.edges()) {
    const Index a = find(e.i), b = find(e.j);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
  // Roots are the smallest members, so visiting v ascending yields sorted output.
  std::vector<Index> slot(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<Index>> comps;
  for (Index v = 0; v < n; ++v) {
    const Index r = find(v);
    auto& s = slot[static_cast<std::size_t>(r)];
    if (s < 0) {
      s = static_cast<Index>(comps.size());
      comps.emplace_back();
    }
    comps[static_cast<std::size_t>(s)].push_back(v);
  }
  return comps;
}

void write_edge_list(const NeighborGraph& g, std::ostream& out) {
  char buf[40];
  for (const auto& e : g.edges()) {
    std::snprintf(buf, sizeof buf, "%.17g", e.weight);
    out << e.i << ' ' << e.j << ' ' << buf << '\n';
  }
}

}  // namespace sge

#include "sge/geodesic.hpp"

#include <string>

namespace sge {

GeodesicTable floyd_apsp(const NeighborGraph& g) {
  const Index n = g.size();
  if (n < 1) throw InvalidArgument("floyd_apsp needs at least one node");
  constexpr double inf = std::numeric_limits<double>::infinity();

  GeodesicTable t;
  t.dist = RowMatrix::Constant(n, n, inf);
  t.next.setConstant(n, n, kNoHop);
  for (Index v = 0; v < n; ++v) {
    t.dist(v, v) = 0.0;
    t.next(v, v) = static_cast<std::int32_t>(v);
  }
  for (const auto& e : g.edges()) {
    t.dist(e.i, e.j) = t.dist(e.j, e.i) = e.weight;
    t.next(e.i, e.j) = static_cast<std::int32_t>(e.j);
    t.next(e.j, e.i) = static_cast<std::int32_t>(e.i);
  }

  double* d = t.dist.data();
  std::int32_t* nx = t.next.data();
  for (Index k = 0; k < n; ++k) {
    const double* dk = d + k * n;
    for (Index i = 0; i < n; ++i) {
      double* di = d + i * n;
      const double dik = di[k];
      if (dik == inf) continue;
      std::int32_t* ni = nx + i * n;
      const std::int32_t hop = ni[k];
      for (Index j = 0; j < n; ++j) {
        const double cand = dik + dk[j];
        if (cand < di[j]) {
          di[j] = cand;
          ni[j] = hop;
        }
      }
    }
  }
  return t;
}

namespace {

std::size_t component_root(const GeodesicTable& t, Index v) {
  for (Index u = 0; u < t.size(); ++u) {
    if (t.reachable(v, u)) return static_cast<std::size_t>(u);
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

GeodesicPath extract_path(const GeodesicTable& t, Index i, Index j) {
  const Index n = t.size();
  if (i < 0 || j < 0 || i >= n || j >= n) throw InvalidArgument("path endpoint out of range");
  if (i == j) throw InvalidArgument("extract_path needs distinct endpoints");
  if (!t.reachable(i, j)) {
    throw NoPathError(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                      component_root(t, i), component_root(t, j));
  }
  GeodesicPath path;
  path.indices.push_back(i);
  Index v = i;
  while (v != j) {
    const Index u = t.next(v, j);
    path.length += t.dist(v, u);
    path.indices.push_back(u);
    v = u;
    if (path.m() > n) throw NumericalError("next-hop matrix contains a cycle");
  }
  return path;
}

Index path_point_count(const GeodesicTable& t, Index i, Index j) {
  if (!t.reachable(i, j)) return 0;
  Index count = 1;
  for (Index v = i; v != j; v = t.next(v, j)) {
    if (++count > t.size()) throw NumericalError("next-hop matrix contains a cycle");
  }
  return count;
}

}  // namespace sge

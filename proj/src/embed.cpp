#include "sge/embed.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "sge/geodesic.hpp"
#include "sge/graph.hpp"
#include "sge/parallel.hpp"
#include "sge/spline.hpp"

namespace sge {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct GraphStage {
  PointCloud cloud;
  NeighborGraph graph;
  std::vector<Index> kept;
};

GraphStage neighbor_stage(const PointCloud& cloud, Index delta, bool largest_component) {
  NeighborGraph graph = build_graph(cloud, knn(cloud, delta));
  const auto comps = connected_components(graph);
  std::vector<Index> all(static_cast<std::size_t>(cloud.size()));
  std::iota(all.begin(), all.end(), Index{0});
  if (comps.size() == 1) return {cloud, std::move(graph), std::move(all)};

  if (!largest_component) {
    std::vector<std::size_t> sizes;
    for (const auto& c : comps) sizes.push_back(c.size());
    throw DisconnectedGraphError(std::move(sizes));
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < comps.size(); ++k) {
    if (comps[k].size() > comps[best].size()) best = k;
  }
  const auto& nodes = comps[best];
  if (nodes.size() < 2) throw InvalidArgument("largest component has a single point");
  return {cloud.subset(nodes), graph.induced(nodes), nodes};
}

void check_p(Index p, Index n) {
  if (p < 1 || p > n) {
    throw InvalidArgument("embedding dimension p must lie in [1, n]; got p = " + std::to_string(p) +
                          " with n = " + std::to_string(n));
  }
}

}  // namespace

void SgeParams::validate(Index n) const {
  if (delta < 1 || delta > n - 1) {
    throw InvalidArgument("delta must lie in [1, n-1]; got " + std::to_string(delta));
  }
  if (!(mu_s >= 0.0) || !std::isfinite(mu_s)) throw InvalidArgument("mu_s must be finite and >= 0");
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidArgument("nu must be finite and >= 0");
  if (h < 2) throw InvalidArgument("h must be >= 2");
  check_p(p, n);
}

DistanceMatrix pairwise_sq_euclidean(const PointCloud& cloud) {
  const Index n = cloud.size();
  const auto& pts = cloud.points();
  DistanceMatrix d{Matrix::Zero(n, n)};
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) d.squared(i, j) = d.squared(j, i) = squared_distance(pts, i, pts, j);
  }
  return d;
}

GramMatrix double_center(const DistanceMatrix& d) {
  const Matrix& sq = d.squared;
  const Index n = sq.rows();
  if (sq.cols() != n) throw InvalidArgument("distance matrix must be square");
  const Vector row_mean = sq.rowwise().mean();
  const Eigen::RowVectorXd col_mean = sq.colwise().mean();
  const double mean = sq.mean();
  GramMatrix s{Matrix(n, n)};
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i <= j; ++i) {
      s.values(i, j) = s.values(j, i) = -0.5 * (sq(i, j) - row_mean(i) - col_mean(j) + mean);
    }
  }
  return s;
}

Embedding svd_embed(const GramMatrix& s, Index p) {
  const Index n = s.values.rows();
  check_p(p, n);
  // S is symmetric, so its SVD follows from the eigen-decomposition: singular
  // values are |eigenvalues| and right singular vectors are eigenvectors.
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s.values);
  if (eig.info() != Eigen::Success) throw NumericalError("eigen-decomposition of Gram matrix failed");
  const Vector& lambda = eig.eigenvalues();

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const double ma = std::abs(lambda(a)), mb = std::abs(lambda(b));
    if (ma != mb) return ma > mb;
    return lambda(a) > lambda(b);
  });

  Embedding out;
  out.coords.resize(n, p);
  out.singular_values.resize(p);
  double total = 0.0, negative = 0.0;
  for (Index k = 0; k < p; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    const double sigma = std::abs(lambda(src));
    Vector axis = eig.eigenvectors().col(src) * std::sqrt(sigma);

    const double peak = axis.cwiseAbs().maxCoeff();
    if (peak > 0.0) {
      for (Index i = 0; i < n; ++i) {
        if (std::abs(axis(i)) >= peak * (1.0 - 1e-12)) {
          if (axis(i) < 0.0) axis = -axis;
          break;
        }
      }
    }
    out.coords.col(k) = axis;
    out.singular_values(k) = sigma;
    total += sigma;
    if (lambda(src) < 0.0) negative += sigma;
  }
  out.negative_energy_fraction = total > 0.0 ? negative / total : 0.0;
  return out;
}

Embedding embed_lengths(const Matrix& lengths, Index p) {
  return svd_embed(double_center(DistanceMatrix{lengths.cwiseProduct(lengths)}), p);
}

EmbedResult run_mds(const PointCloud& cloud, Index p) {
  const auto start = Clock::now();
  check_p(p, cloud.size());
  EmbedResult r;
  r.embedding = svd_embed(double_center(pairwise_sq_euclidean(cloud)), p);
  r.diagnostics.method = "mds";
  r.diagnostics.kept.resize(static_cast<std::size_t>(cloud.size()));
  std::iota(r.diagnostics.kept.begin(), r.diagnostics.kept.end(), Index{0});
  r.diagnostics.wall_time_ms = elapsed_ms(start);
  return r;
}

EmbedResult run_isomap(const PointCloud& cloud, Index delta, Index p, bool largest_component) {
  SgeParams params;
  params.delta = delta;
  params.p = p;
  params.fallback_only = true;
  params.largest_component = largest_component;
  EmbedResult r = run_sge(cloud, params);
  r.diagnostics.method = "isomap";
  return r;
}

EmbedResult run_sge(const PointCloud& cloud, const SgeParams& params) {
  const auto start = Clock::now();
  params.validate(cloud.size());
  GraphStage stage = neighbor_stage(cloud, params.delta, params.largest_component);
  check_p(params.p, stage.cloud.size());
  const GeodesicTable table = floyd_apsp(stage.graph);
  const Index n = stage.cloud.size();

  EmbedResult r;
  r.diagnostics.method = params.fallback_only ? "sge-fallback" : "sge";
  r.diagnostics.delta = params.delta;
  r.diagnostics.kept = std::move(stage.kept);

  if (params.fallback_only) {
    r.diagnostics.degree_histogram[0] = static_cast<std::size_t>(n * (n - 1) / 2);
    r.diagnostics.max_cap_ratio = n > 1 ? 1.0 / length_cap(1.0, params.nu) : 0.0;
    r.embedding = embed_lengths(table.dist, params.p);
    r.diagnostics.wall_time_ms = elapsed_ms(start);
    return r;
  }

  const auto& pts = stage.cloud.points();
  Matrix lengths = Matrix::Zero(n, n);
  std::vector<std::array<std::size_t, 4>> histograms(static_cast<std::size_t>(n));
  std::vector<double> cap_ratio(static_cast<std::size_t>(n), 0.0);

  parallel_for(static_cast<std::size_t>(n), [&](std::size_t row) {
    const Index i = static_cast<Index>(row);
    auto& hist = histograms[row];
    hist.fill(0);
    RowMatrix path_points;
    for (Index j = i + 1; j < n; ++j) {
      const GeodesicPath path = extract_path(table, i, j);
      path_points.resize(path.m(), pts.cols());
      for (Index k = 0; k < path.m(); ++k) path_points.row(k) = pts.row(path.indices[static_cast<std::size_t>(k)]);
      const CascadeResult res = smooth_geodesic_length(path_points, params.mu_s, params.nu, params.h);
      lengths(i, j) = lengths(j, i) = res.length;
      ++hist[static_cast<std::size_t>(res.degree_used)];
      const double cap = length_cap(res.geodesic_length, params.nu);
      if (cap > 0.0) cap_ratio[row] = std::max(cap_ratio[row], res.length / cap);
    }
  });

  for (std::size_t row = 0; row < histograms.size(); ++row) {
    for (std::size_t k = 0; k < 4; ++k) r.diagnostics.degree_histogram[k] += histograms[row][k];
    r.diagnostics.max_cap_ratio = std::max(r.diagnostics.max_cap_ratio, cap_ratio[row]);
  }
  r.embedding = embed_lengths(lengths, params.p);
  r.diagnostics.wall_time_ms = elapsed_ms(start);
  return r;
}

Embedding mds(const PointCloud& cloud, Index p) { return run_mds(cloud, p).embedding; }

Embedding isomap(const PointCloud& cloud, Index delta, Index p) {
  return run_isomap(cloud, delta, p).embedding;
}

Embedding sge(const PointCloud& cloud, const SgeParams& params) { return run_sge(cloud, params).embedding; }

nlohmann::json diagnostics_json(const EmbedResult& result, const nlohmann::json& params) {
  nlohmann::json j;
  j["method"] = result.diagnostics.method;
  j["params"] = params;
  std::vector<double> sv(result.embedding.singular_values.data(),
                         result.embedding.singular_values.data() + result.embedding.singular_values.size());
  j["singular_values"] = sv;
  const auto& h = result.diagnostics.degree_histogram;
  j["degree_histogram"] = {{"3", h[3]}, {"2", h[2]}, {"1", h[1]}, {"0", h[0]}};
  j["negative_energy_fraction"] = result.embedding.negative_energy_fraction;
  j["max_cap_ratio"] = result.diagnostics.max_cap_ratio;
  j["n_embedded"] = result.diagnostics.kept.size();
  if (!result.diagnostics.kept.empty() &&
      static_cast<Index>(result.diagnostics.kept.size()) != result.diagnostics.kept.back() + 1) {
    j["kept_rows"] = result.diagnostics.kept;
  }
  j["wall_time_ms"] = result.diagnostics.wall_time_ms;
  return j;
}

}  // namespace sge

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sge/data.hpp"
#include "sge/embed.hpp"
#include "sge/geodesic.hpp"
#include "sge/metrics.hpp"
#include "sge/spline.hpp"

using namespace sge;

namespace {

Matrix embedded_distances(const Embedding& e) { return pairwise_euclidean(e.as_cloud()); }

double max_rel_diff(const Matrix& a, const Matrix& b) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

PointCloud line_cloud(std::initializer_list<double> xs) {
  RowMatrix pts(static_cast<Index>(xs.size()), 1);
  Index i = 0;
  for (double x : xs) pts(i++, 0) = x;
  return PointCloud(pts);
}

}  // namespace

TEST_CASE("pairwise squared distances") {
  RowMatrix two(2, 2);
  two << 0, 0, 3, 0;
  CHECK(pairwise_sq_euclidean(PointCloud(two)).squared(0, 1) == 9.0);
  CHECK(pairwise_sq_euclidean(PointCloud(RowMatrix::Ones(4, 3))).squared.isZero());

  std::mt19937_64 rng(1);
  const RowMatrix r = oracle::random_points(5, 4, rng);
  const auto d = pairwise_sq_euclidean(PointCloud(r));
  for (Index i = 0; i < 5; ++i) {
    for (Index j = 0; j < 5; ++j) CHECK(d.squared(i, j) == doctest::Approx((r.row(i) - r.row(j)).squaredNorm()).epsilon(1e-14));
  }
}

TEST_CASE("double centering") {
  CHECK(double_center(DistanceMatrix{Matrix::Zero(3, 3)}).values.isZero());
  Matrix d2(2, 2);
  d2 << 0, 1, 1, 0;
  const Matrix s = double_center(DistanceMatrix{d2}).values;
  CHECK(s(0, 0) == doctest::Approx(0.25));
  CHECK(s(0, 1) == doctest::Approx(-0.25));
  CHECK(s(1, 0) == doctest::Approx(-0.25));
  CHECK(s(1, 1) == doctest::Approx(0.25));

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 30);
    Matrix d = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = u(rng);
    }
    const Matrix g = double_center(DistanceMatrix{d}).values;
    const double tol = 1e-10 * static_cast<double>(n) * g.cwiseAbs().maxCoeff();
    CHECK(g.rowwise().sum().cwiseAbs().maxCoeff() <= tol);
    CHECK(g.colwise().sum().cwiseAbs().maxCoeff() <= tol);
  }
}

TEST_CASE("svd embedding of two points") {
  Matrix d2(2, 2);
  d2 << 0, 1, 1, 0;
  const Embedding e = svd_embed(double_center(DistanceMatrix{d2}), 1);
  CHECK(e.singular_values(0) == doctest::Approx(0.5));
  // Tie in magnitude: the first entry takes the positive sign.
  CHECK(e.coords(0, 0) == doctest::Approx(0.5));
  CHECK(e.coords(1, 0) == doctest::Approx(-0.5));
  const Embedding both = svd_embed(double_center(DistanceMatrix{d2}), 2);
  CHECK(both.singular_values(1) == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(svd_embed(double_center(DistanceMatrix{d2}), 3), InvalidArgument);
  CHECK_THROWS_AS(svd_embed(double_center(DistanceMatrix{d2}), 0), InvalidArgument);
}

TEST_CASE("unit square corners are recovered") {
  RowMatrix sq(4, 2);
  sq << 0, 0, 1, 0, 1, 1, 0, 1;
  const PointCloud c(sq);
  const Embedding e = mds(c, 2);
  CHECK(max_rel_diff(embedded_distances(e), pairwise_euclidean(c)) < 1e-9);
  CHECK(e.singular_values(0) == doctest::Approx(e.singular_values(1)).epsilon(1e-12));
}

TEST_CASE("zero Gram matrix embeds at the origin") {
  const Embedding e = svd_embed(GramMatrix{Matrix::Zero(5, 5)}, 2);
  CHECK(e.coords.isZero());
  CHECK(e.negative_energy_fraction == 0.0);
}

TEST_CASE("mds") {
  SUBCASE("collinear 3-D points in one dimension") {
    RowMatrix pts(5, 3);
    for (Index k = 0; k < 5; ++k) pts.row(k) = Eigen::RowVector3d(1, 2, -1) * (k * k * 0.3) + Eigen::RowVector3d(4, 0, 1);
    const PointCloud c(pts);
    CHECK(max_rel_diff(embedded_distances(mds(c, 1)), pairwise_euclidean(c)) < 1e-9);
  }
  SUBCASE("p = d reproduces distances") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
      const Index d = 1 + static_cast<Index>(rng() % 5);
      const PointCloud c(oracle::random_points(30, d, rng, 5.0));
      CHECK(max_rel_diff(embedded_distances(mds(c, d)), pairwise_euclidean(c)) < 1e-7);
    }
  }
  SUBCASE("duplicated point") {
    RowMatrix pts = RowMatrix::Ones(6, 3) * 2.5;
    CHECK(mds(PointCloud(pts), 2).coords.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("embedding columns are centred and singular values sorted") {
  std::mt19937_64 rng(4);
  const PointCloud c(oracle::random_points(40, 6, rng));
  const Embedding e = mds(c, 4);
  for (Index k = 0; k < 4; ++k) {
    CHECK(std::abs(e.coords.col(k).mean()) <= 1e-8 * std::max(1.0, e.coords.col(k).cwiseAbs().maxCoeff()));
    if (k > 0) CHECK(e.singular_values(k) <= e.singular_values(k - 1));
  }
}

TEST_CASE("truncated distances agree with a dense SVD oracle") {
  std::mt19937_64 rng(5);
  Matrix d = Matrix::Zero(12, 12);
  std::uniform_real_distribution<double> u(0.5, 3.0);
  for (Index i = 0; i < 12; ++i) {
    for (Index j = i + 1; j < 12; ++j) d(i, j) = d(j, i) = u(rng);  // non-Euclidean
  }
  const GramMatrix s = double_center(DistanceMatrix{d});
  const Embedding e = svd_embed(s, 3);
  Eigen::JacobiSVD<Matrix> svd(s.values, Eigen::ComputeFullU | Eigen::ComputeFullV);
  for (Index k = 0; k < 3; ++k) CHECK(e.singular_values(k) == doctest::Approx(svd.singularValues()(k)).epsilon(1e-10));
  // Scaled right singular vectors span the same coordinates up to per-axis sign.
  const Matrix x = svd.matrixV().leftCols(3) * svd.singularValues().head(3).cwiseSqrt().asDiagonal();
  const Matrix want = pairwise_euclidean(PointCloud(RowMatrix(x)));
  CHECK(max_rel_diff(embedded_distances(e), want) < 1e-9);
  CHECK(e.negative_energy_fraction >= 0.0);
  CHECK(e.negative_energy_fraction <= 1.0);
}

TEST_CASE("svd_embed is repeatable bit for bit") {
  std::mt19937_64 rng(6);
  const PointCloud c(oracle::random_points(50, 3, rng));
  const Embedding a = mds(c, 2), b = mds(c, 2);
  CHECK(a.coords == b.coords);
  CHECK(a.singular_values == b.singular_values);
}

TEST_CASE("isomap") {
  SUBCASE("complete graph equals mds") {
    std::mt19937_64 rng(7);
    const PointCloud c(oracle::random_points(15, 3, rng));
    const Embedding a = isomap(c, 14, 2), b = mds(c, 2);
    CHECK((a.coords - b.coords).cwiseAbs().maxCoeff() < 1e-9);
  }
  SUBCASE("path graph recovers 0-1-3") {
    const Embedding e = isomap(line_cloud({0, 1, 3}), 1, 1);
    const Matrix d = embedded_distances(e);
    CHECK(d(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d(1, 2) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(d(0, 2) == doctest::Approx(3.0).epsilon(1e-12));
  }
  SUBCASE("beats mds on the curved lattice") {
    SphereSpec spec;
    spec.n = 400;
    spec.mode = SphereMode::lattice;
    const PointCloud c = gen_semisphere(spec);
    // The rows nearest the poles crowd into short arcs that detach from the rest.
    const EmbedResult iso = run_isomap(c, 5, 2, true);
    const auto& kept = iso.diagnostics.kept;
    CHECK(kept.size() >= 300);
    const PointCloud band = c.subset(kept);
    const Matrix truth = great_circle_dists(band, 20.0);
    const double e_iso = mad(truth, embedded_distances(iso.embedding));
    const double e_mds = mad(truth, embedded_distances(mds(band, 2)));
    CHECK(e_iso < e_mds);
  }
  SUBCASE("disconnected graph") {
    const PointCloud c = line_cloud({0, 1, 2, 10, 11, 12, 13});
    try {
      isomap(c, 1, 1);
      FAIL("expected DisconnectedGraphError");
    } catch (const DisconnectedGraphError& e) {
      CHECK(e.component_sizes() == std::vector<std::size_t>{3, 4});
    }
    const EmbedResult r = run_isomap(c, 1, 1, true);
    CHECK(r.diagnostics.kept == std::vector<Index>{3, 4, 5, 6});
    CHECK(r.embedding.coords.rows() == 4);
  }
}

TEST_CASE("sge") {
  SphereSpec spec;
  spec.n = 120;
  spec.radial_noise = RadialNoise::gaussian(2.0);
  spec.seed = 4;
  const PointCloud c = gen_semisphere(spec);

  SUBCASE("fallback_only reproduces isomap") {
    SgeParams p;
    p.delta = 4;
    p.fallback_only = true;
    const Embedding a = sge::sge(c, p), b = isomap(c, 4, 2);
    CHECK((a.coords - b.coords).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("collinear cloud with zero budget matches isomap") {
    RowMatrix pts(30, 3);
    for (Index k = 0; k < 30; ++k) pts.row(k) = Eigen::RowVector3d(1, -2, 0.5) * static_cast<double>(k);
    const PointCloud line(pts);
    SgeParams p;
    p.delta = 1;
    p.mu_s = 0.0;
    p.p = 1;
    const Embedding a = sge::sge(line, p), b = isomap(line, 1, 1);
    CHECK((a.coords - b.coords).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, b.coords.cwiseAbs().maxCoeff()));
  }
  SUBCASE("diagnostics") {
    SgeParams p;
    p.delta = 4;
    const EmbedResult r = run_sge(c, p);
    std::size_t total = 0;
    for (auto v : r.diagnostics.degree_histogram) total += v;
    CHECK(total == static_cast<std::size_t>(120 * 119 / 2));
    CHECK(r.diagnostics.max_cap_ratio <= 1.0);
    CHECK(r.embedding.singular_values.size() == 2);
    const auto j = diagnostics_json(r, {{"delta", 4}});
    for (const char* key : {"method", "params", "singular_values", "degree_histogram", "negative_energy_fraction",
                            "wall_time_ms"}) {
      CHECK(j.contains(key));
    }
    CHECK(j["method"] == "sge");
  }
  SUBCASE("invalid parameters") {
    SgeParams p;
    p.delta = 0;
    CHECK_THROWS_AS(sge::sge(c, p), InvalidArgument);
    p.delta = 3;
    p.p = 121;
    CHECK_THROWS_AS(sge::sge(c, p), InvalidArgument);
    p.p = 2;
    p.h = 1;
    CHECK_THROWS_AS(sge::sge(c, p), InvalidArgument);
    p.h = 100;
    p.mu_s = -1;
    CHECK_THROWS_AS(sge::sge(c, p), InvalidArgument);
  }
}

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "sge/data.hpp"

using namespace sge;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("sge_test_data_" + name);
}

std::string data_dir() { return SGE_TEST_DATA_DIR; }

}  // namespace

TEST_CASE("point cloud validates shape, finiteness and labels") {
  CHECK_THROWS_AS(PointCloud(RowMatrix(0, 3)), InvalidArgument);
  CHECK_THROWS_AS(PointCloud(RowMatrix(2, 0)), InvalidArgument);
  RowMatrix bad = RowMatrix::Zero(2, 2);
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(PointCloud{bad}, InvalidArgument);
  CHECK_THROWS_AS(PointCloud(RowMatrix::Zero(2, 2), std::vector<int>{1}), InvalidArgument);
  const PointCloud ok(RowMatrix::Zero(2, 2), std::vector<int>{1, 2});
  CHECK(ok.has_labels());
  const Index rows[] = {1};
  CHECK((*ok.subset(rows).labels())[0] == 2);
}

TEST_CASE("radial noise parses its three forms") {
  CHECK(RadialNoise::parse("none").kind == RadialNoise::Kind::none);
  const auto g = RadialNoise::parse("gaussian:3.0");
  CHECK(g.kind == RadialNoise::Kind::gaussian);
  CHECK(g.scale == 3.0);
  const auto u = RadialNoise::parse("uniform:0.9");
  CHECK(u.kind == RadialNoise::Kind::uniform);
  CHECK(u.scale == doctest::Approx(0.9));
  CHECK_THROWS_AS(RadialNoise::parse("cauchy:1"), InvalidArgument);
  CHECK_THROWS_AS(RadialNoise::parse("gaussian:-1"), InvalidArgument);
  CHECK_THROWS_AS(RadialNoise::parse("gaussian:abc"), InvalidArgument);
}

TEST_CASE("lattice shape is the most square factorisation") {
  CHECK(lattice_shape(600) == std::pair<Index, Index>{25, 24});
  CHECK(lattice_shape(400) == std::pair<Index, Index>{20, 20});
  CHECK(lattice_shape(6) == std::pair<Index, Index>{3, 2});
  CHECK_THROWS_AS(lattice_shape(7), InvalidArgument);
}

TEST_CASE("gaussian random semi-sphere has mean norm near r0") {
  SphereSpec spec;
  spec.n = 600;
  spec.r0 = 20;
  spec.radial_noise = RadialNoise::gaussian(3.0);
  spec.seed = 7;
  const PointCloud c = gen_semisphere(spec);
  CHECK(c.size() == 600);
  CHECK(c.dim() == 3);
  const double mean_norm = c.points().rowwise().norm().mean();
  CHECK(std::abs(mean_norm - 20.0) < 0.5);
}

TEST_CASE("noise-free lattice lies exactly on the sphere") {
  SphereSpec spec;
  spec.n = 600;
  spec.mode = SphereMode::lattice;
  const PointCloud c = gen_semisphere(spec);
  for (Index i = 0; i < c.size(); ++i) CHECK(c.points().row(i).norm() == doctest::Approx(20.0).epsilon(1e-14));
}

TEST_CASE("uniform lattice noise stays inside its support and is reproducible") {
  SphereSpec spec;
  spec.n = 600;
  spec.mode = SphereMode::lattice;
  spec.radial_noise = RadialNoise::uniform(0.9);
  spec.seed = 11;
  const PointCloud a = gen_semisphere(spec);
  const PointCloud b = gen_semisphere(spec);
  CHECK(a == b);
  for (Index i = 0; i < a.size(); ++i) {
    const double r = a.points().row(i).norm();
    CHECK(r >= 19.1 - 1e-12);
    CHECK(r <= 20.9 + 1e-12);
  }
  spec.seed = 12;
  CHECK_FALSE(gen_semisphere(spec) == a);
}

TEST_CASE("random semi-sphere angles stay in range and larger n extends smaller n") {
  SphereSpec spec;
  spec.n = 300;
  spec.radial_noise = RadialNoise::gaussian(2.0);
  spec.seed = 3;
  const PointCloud small = gen_semisphere(spec);
  spec.n = 500;
  const PointCloud large = gen_semisphere(spec);
  CHECK(large.points().topRows(300) == small.points());

  for (Index i = 0; i < large.size(); ++i) {
    const auto row = large.points().row(i);
    // r may be negative only with absurd noise; here all radii are positive.
    CHECK(std::abs(row(2)) <= 20.0 + 5 * 2.0);
    const double g2 = std::atan2(row(1), row(0));
    CHECK(g2 >= -1e-12);
    CHECK(g2 <= std::numbers::pi + 1e-12);
  }
}

TEST_CASE("sphere spec rejects invalid parameters") {
  SphereSpec spec;
  spec.n = 3;
  CHECK_THROWS_AS(gen_semisphere(spec), InvalidArgument);
  spec.n = 10;
  spec.r0 = 0;
  CHECK_THROWS_AS(gen_semisphere(spec), InvalidArgument);
  spec.r0 = 20;
  spec.mode = SphereMode::lattice;
  spec.n = 13;
  CHECK_THROWS_AS(gen_semisphere(spec), InvalidArgument);
}

TEST_CASE("csv parsing") {
  SUBCASE("minimal file") {
    std::istringstream in("x1,x2\n0,0\n1,0\n");
    const PointCloud c = parse_csv(in);
    CHECK(c.size() == 2);
    CHECK(c.dim() == 2);
    CHECK(c.points()(1, 0) == 1.0);
    CHECK_FALSE(c.has_labels());
  }
  SUBCASE("label column") {
    std::istringstream in("a,label,b\n1,2,3\n4,6,5\n");
    const PointCloud c = parse_csv(in);
    CHECK(c.dim() == 2);
    CHECK(*c.labels() == std::vector<int>{2, 6});
    CHECK(c.points()(1, 1) == 5.0);
  }
  SUBCASE("NaN cell names its line") {
    std::istringstream in("x,y\n1,2\n3,NaN\n");
    try {
      parse_csv(in);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("ragged row") {
    std::istringstream in("x,y\n1,2\n3\n");
    CHECK_THROWS_AS(parse_csv(in), ParseError);
  }
  SUBCASE("non-numeric cell") {
    std::istringstream in("x,y\n1,two\n");
    CHECK_THROWS_AS(parse_csv(in), ParseError);
  }
  SUBCASE("empty file") {
    std::istringstream in("");
    CHECK_THROWS_AS(parse_csv(in), ParseError);
  }
  SUBCASE("header only") {
    std::istringstream in("x,y\n");
    CHECK_THROWS_AS(parse_csv(in), ParseError);
  }
}

TEST_CASE("save_csv then load_csv is the identity") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1e3);
  RowMatrix pts(17, 4);
  for (Index i = 0; i < pts.rows(); ++i) {
    for (Index k = 0; k < pts.cols(); ++k) pts(i, k) = g(rng) / 7.0;
  }
  pts(0, 0) = 1e-300;
  pts(1, 1) = -0.0;
  std::vector<int> labels(17);
  for (int i = 0; i < 17; ++i) labels[static_cast<std::size_t>(i)] = i % 3;
  for (const bool with_labels : {false, true}) {
    const PointCloud c = with_labels ? PointCloud(pts, labels) : PointCloud(pts);
    const auto path = temp_file(with_labels ? "roundtrip_l.csv" : "roundtrip.csv");
    save_csv(c, path);
    CHECK(load_csv(path) == c);
  }
  CHECK_THROWS_AS(load_csv(temp_file("does_not_exist.csv")), IoError);
}

TEST_CASE("idx loading filters, samples and scales") {
  const std::string images = data_dir() + "/mnist-subset-images-idx3-ubyte";
  const std::string labels = data_dir() + "/mnist-subset-labels-idx1-ubyte";

  const PointCloud twos = load_idx(images, labels, {2}, 400, 7);
  CHECK(twos.size() == 400);
  CHECK(twos.dim() == 784);
  for (int l : *twos.labels()) CHECK(l == 2);
  CHECK(twos.points().minCoeff() >= 0.0);
  CHECK(twos.points().maxCoeff() <= 1.0);
  CHECK(load_idx(images, labels, {2}, 400, 7) == twos);
  CHECK_FALSE(load_idx(images, labels, {2}, 400, 8) == twos);

  const PointCloud mixed = load_idx(images, labels, {2, 4, 6, 8}, 400, 7);
  std::set<int> seen(mixed.labels()->begin(), mixed.labels()->end());
  for (int l : seen) CHECK((l == 2 || l == 4 || l == 6 || l == 8));
  CHECK(seen.size() == 4);

  CHECK_THROWS_AS(load_idx(images, labels, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, 0, 7), InvalidArgument);
  CHECK_THROWS_AS(load_idx(images, labels, {2}, 501, 7), InvalidArgument);
  CHECK_THROWS_AS(load_idx(labels, images, {2}, 10, 7), ParseError);

  const auto truncated = temp_file("truncated-idx3");
  {
    std::ifstream src(images, std::ios::binary);
    std::ofstream dst(truncated, std::ios::binary);
    std::vector<char> buf(1000);
    src.read(buf.data(), 1000);
    dst.write(buf.data(), 1000);
  }
  CHECK_THROWS_AS(load_idx(truncated, labels, {2}, 10, 7), ParseError);
}

TEST_CASE("gaussian pixel noise") {
  const PointCloud clean = load_idx(data_dir() + "/mnist-subset-images-idx3-ubyte",
                                    data_dir() + "/mnist-subset-labels-idx1-ubyte", {2}, 400, 1);
  CHECK(add_gaussian_pixel_noise(clean, {0.0, 3}) == clean);

  const PointCloud noisy = add_gaussian_pixel_noise(clean, {0.2, 3});
  const RowMatrix diff = noisy.points() - clean.points();
  const double mean = diff.mean();
  const double var = (diff.array() - mean).square().sum() / static_cast<double>(diff.size() - 1);
  CHECK(std::abs(var - 0.04) < 0.04 * 0.05);
  CHECK(*noisy.labels() == *clean.labels());
  CHECK_FALSE(add_gaussian_pixel_noise(clean, {0.2, 4}) == noisy);
  CHECK(add_gaussian_pixel_noise(clean, {0.2, 3}) == noisy);
  CHECK_THROWS_AS(add_gaussian_pixel_noise(clean, {-0.1, 3}), InvalidArgument);

  // Per-image mean shift is small (central limit bound).
  for (Index i = 0; i < 20; ++i) CHECK(std::abs(diff.row(i).mean()) < 4 * 0.2 / std::sqrt(784.0));
}

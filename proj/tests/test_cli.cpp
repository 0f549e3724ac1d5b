#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "sge/data.hpp"

using namespace sge;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

class Scratch {
 public:
  explicit Scratch(const std::string& name) : dir_(std::filesystem::temp_directory_path() / ("sge_test_cli_" + name)) {
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  std::string operator/(const std::string& file) const { return (dir_ / file).string(); }

 private:
  std::filesystem::path dir_;
};

const std::string kImages = std::string(SGE_TEST_DATA_DIR) + "/mnist-subset-images-idx3-ubyte";
const std::string kLabels = std::string(SGE_TEST_DATA_DIR) + "/mnist-subset-labels-idx1-ubyte";

}  // namespace

TEST_CASE("help and version") {
  for (const auto& args : std::vector<std::vector<std::string>>{{"--help"},
                                                                {"gen", "--help"},
                                                                {"gen", "sphere", "--help"},
                                                                {"gen", "mnist", "--help"},
                                                                {"noise", "--help"},
                                                                {"embed", "--help"},
                                                                {"eval", "--help"},
                                                                {"eval", "mad", "--help"},
                                                                {"eval", "adjacency", "--help"},
                                                                {"bench", "--help"},
                                                                {"plot", "--help"}}) {
    CAPTURE(args.size());
    const Outcome r = run(args);
    CHECK(r.code == 0);
    CHECK(r.out.find("Usage") != std::string::npos);
  }
  const Outcome v = run({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.find(SGE_VERSION) != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"gen", "sphere", "-o", "x.csv"}).code == 2);  // seed is required
  CHECK(run({"embed", "--method", "tsne", "-i", "a", "-o", "b"}).code == 2);
  CHECK(run({"--threads", "0", "gen", "sphere", "--seed", "1", "-o", "x.csv"}).code == 2);

  Scratch s("usage");
  REQUIRE(run({"gen", "sphere", "--n", "40", "--seed", "1", "-o", s / "c.csv"}).code == 0);
  const Outcome r = run({"embed", "-i", s / "c.csv", "--delta", "0", "-o", s / "e.csv"});
  CHECK(r.code == 2);
  CHECK(r.err.find("delta") != std::string::npos);
  CHECK(run({"embed", "-i", s / "c.csv", "--mu-s", "-1", "-o", s / "e.csv"}).code == 2);
  CHECK(run({"gen", "sphere", "--n", "7", "--mode", "lattice", "--seed", "1", "-o", s / "l.csv"}).code == 2);
  CHECK(run({"plot", "--kind", "pie", "-i", s / "c.csv", "-o", s / "p.svg"}).code == 2);
}

TEST_CASE("gen and noise") {
  Scratch s("gen");
  REQUIRE(run({"gen", "sphere", "--n", "50", "--radial-noise", "gaussian:3", "--seed", "4", "-o", s / "a.csv"}).code ==
          0);
  REQUIRE(run({"gen", "sphere", "--n", "50", "--radial-noise", "gaussian:3", "--seed", "4", "-o", s / "b.csv"}).code ==
          0);
  CHECK(slurp(s / "a.csv") == slurp(s / "b.csv"));
  const PointCloud a = load_csv(s / "a.csv");
  CHECK(a.size() == 50);
  CHECK(a.dim() == 3);

  REQUIRE(run({"gen", "mnist", "--images", kImages, "--labels", kLabels, "--digits", "2,8", "--count", "30", "--seed",
               "1", "-o", s / "m.csv"})
              .code == 0);
  const PointCloud m = load_csv(s / "m.csv");
  CHECK(m.size() == 30);
  CHECK(m.dim() == 784);
  for (int l : *m.labels()) CHECK((l == 2 || l == 8));
  CHECK(slurp(s / "m.csv").rfind("px1,px2,", 0) == 0);

  REQUIRE(run({"noise", "--sigma", "0.2", "--seed", "3", "-i", s / "m.csv", "-o", s / "n.csv"}).code == 0);
  const PointCloud n = load_csv(s / "n.csv");
  CHECK(n.size() == 30);
  CHECK(*n.labels() == *m.labels());
  CHECK((n.points() - m.points()).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("embed") {
  Scratch s("embed");
  REQUIRE(run({"gen", "sphere", "--n", "120", "--radial-noise", "gaussian:1", "--seed", "2", "-o", s / "c.csv"})
              .code == 0);

  SUBCASE("fallback-only sge writes the isomap csv") {
    REQUIRE(run({"embed", "--method", "isomap", "--delta", "6", "-i", s / "c.csv", "-o", s / "iso.csv"}).code == 0);
    REQUIRE(run({"embed", "--method", "sge", "--fallback-only", "--delta", "6", "-i", s / "c.csv", "-o", s / "fb.csv"})
                .code == 0);
    CHECK(slurp(s / "iso.csv") == slurp(s / "fb.csv"));
    CHECK(slurp(s / "iso.csv").rfind("e1,e2\n", 0) == 0);
  }
  SUBCASE("report and threads") {
    REQUIRE(run({"embed", "--delta", "6", "-i", s / "c.csv", "-o", s / "a.csv", "--report", s / "a.json"}).code == 0);
    REQUIRE(run({"--threads", "3", "embed", "--delta", "6", "-i", s / "c.csv", "-o", s / "b.csv"}).code == 0);
    CHECK(slurp(s / "a.csv") == slurp(s / "b.csv"));
    const json rep = json::parse(slurp(s / "a.json"));
    CHECK(rep.at("method") == "sge");
    CHECK(rep.at("params").at("delta") == 6);
    CHECK(rep.at("n_embedded") == 120);
    CHECK(rep.at("max_cap_ratio").get<double>() <= 1.0);
    std::size_t pairs = 0;
    for (const auto& [k, v] : rep.at("degree_histogram").items()) pairs += v.get<std::size_t>();
    CHECK(pairs == 120 * 119 / 2);
  }
  SUBCASE("mds keeps labels") {
    REQUIRE(run({"gen", "mnist", "--images", kImages, "--labels", kLabels, "--digits", "4,6", "--count", "25", "--seed",
                 "5", "-o", s / "m.csv"})
                .code == 0);
    REQUIRE(run({"embed", "--method", "mds", "--p", "3", "-i", s / "m.csv", "-o", s / "e.csv"}).code == 0);
    const PointCloud e = load_csv(s / "e.csv");
    CHECK(e.dim() == 3);
    CHECK(*e.labels() == *load_csv(s / "m.csv").labels());
  }
  SUBCASE("disconnected graph exits 3 unless restricted") {
    std::ofstream(s / "two.csv") << "x,y\n0,0\n1,0\n2,0\n50,0\n51,0\n52,0\n53,0\n";
    const Outcome r = run({"embed", "--method", "isomap", "--delta", "1", "-i", s / "two.csv", "-o", s / "e.csv"});
    CHECK(r.code == 3);
    CHECK(r.err.find("--largest-component") != std::string::npos);
    CHECK(run({"embed", "--delta", "1", "--largest-component", "-i", s / "two.csv", "-o", s / "e.csv", "--report",
               s / "r.json"})
              .code == 0);
    CHECK(load_csv(s / "e.csv").size() == 4);
    CHECK(json::parse(slurp(s / "r.json")).at("kept_rows") == json::array({3, 4, 5, 6}));
  }
  SUBCASE("io errors exit 4") {
    CHECK(run({"embed", "-i", s / "missing.csv", "-o", s / "e.csv"}).code == 4);
    std::ofstream(s / "bad.csv") << "x,y\n1,2\n3\n";
    const Outcome r = run({"embed", "-i", s / "bad.csv", "-o", s / "e.csv"});
    CHECK(r.code == 4);
    CHECK(r.err.find("line 3") != std::string::npos);
    CHECK(run({"embed", "-i", s / "c.csv", "-o", "/nonexistent/dir/e.csv"}).code == 4);
  }
}

TEST_CASE("eval prints json on stdout") {
  Scratch s("eval");
  REQUIRE(run({"gen", "sphere", "--n", "60", "--seed", "8", "-o", s / "c.csv"}).code == 0);
  REQUIRE(run({"embed", "--method", "mds", "--p", "3", "-i", s / "c.csv", "-o", s / "e.csv"}).code == 0);

  const Outcome euc = run({"eval", "mad", "--ref", s / "c.csv", "--emb", s / "e.csv"});
  REQUIRE(euc.code == 0);
  const json j = json::parse(euc.out);
  CHECK(j.at("kind") == "mad");
  CHECK(j.at("value").get<double>() < 1e-9);

  const Outcome gc = run({"eval", "mad", "--ref", s / "c.csv", "--emb", s / "e.csv", "--truth", "great-circle"});
  REQUIRE(gc.code == 0);
  CHECK(json::parse(gc.out).at("value").get<double>() > 0.1);

  const Outcome adj = run({"eval", "adjacency", "--orig", s / "c.csv", "--emb", s / "e.csv", "--delta", "4"});
  REQUIRE(adj.code == 0);
  CHECK(json::parse(adj.out).at("value").get<double>() < 1e-9);

  REQUIRE(run({"gen", "sphere", "--n", "50", "--seed", "8", "-o", s / "short.csv"}).code == 0);
  CHECK(run({"eval", "mad", "--ref", s / "short.csv", "--emb", s / "e.csv"}).code == 2);
}

TEST_CASE("bench and plot") {
  Scratch s("bench");
  std::ofstream(s / "cfg.json") << R"({"study": "noise", "base_seed": 1, "n": 64, "etas": [0, 1], "deltas": [4],
                                       "realizations": 2})";
  const Outcome r = run({"bench", "--config", s / "cfg.json", "-o", s / "rep.json", "--svg", s / "rep.svg"});
  REQUIRE(r.code == 0);
  const json rep = json::parse(slurp(s / "rep.json"));
  CHECK(rep.at("cells").size() == 4);
  CHECK(slurp(s / "rep.svg").find("<polyline") != std::string::npos);

  CHECK(run({"plot", "-i", s / "rep.json", "-o", s / "auto.svg"}).code == 0);
  CHECK(slurp(s / "auto.svg") == slurp(s / "rep.svg"));
  CHECK(run({"plot", "--kind", "heatmap", "-i", s / "rep.json", "-o", s / "h.svg"}).code == 2);

  std::ofstream(s / "bad.json") << R"({"study": "noise"})";
  CHECK(run({"bench", "--config", s / "bad.json", "-o", s / "x.json"}).code == 2);
  std::ofstream(s / "broken.json") << "{";
  CHECK(run({"bench", "--config", s / "broken.json", "-o", s / "x.json"}).code == 4);
  CHECK(run({"bench", "--config", s / "none.json", "-o", s / "x.json"}).code == 4);

  REQUIRE(run({"gen", "sphere", "--n", "30", "--seed", "1", "-o", s / "c.csv"}).code == 0);
  REQUIRE(run({"plot", "-i", s / "c.csv", "-o", s / "c.svg", "--title", "cloud"}).code == 0);
  CHECK(slurp(s / "c.svg").find(">cloud</text>") != std::string::npos);
}

#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "sge/bench.hpp"
#include "sge/data.hpp"
#include "sge/embed.hpp"
#include "sge/metrics.hpp"
#include "sge/parallel.hpp"
#include "sge/svg.hpp"

namespace sge::cli {
namespace {

struct Options {
  unsigned threads = 1;

  // gen sphere
  Index n = 600;
  double r0 = 20.0;
  std::string radial_noise = "none";
  std::string mode = "random";
  std::uint64_t seed = 0;
  std::string output;

  // gen mnist
  std::string images, labels;
  std::vector<int> digits{2};
  Index count = 400;

  // noise
  double sigma = 0.0;
  std::string input;

  // embed
  std::string method = "sge";
  Index delta = 3;
  double mu_s = 1.0;
  double nu = 10.0;
  Index h = 100;
  Index p = 2;
  std::string report;
  bool fallback_only = false;
  bool largest_component = false;

  // eval
  std::string ref, emb, orig;
  std::string truth = "euclidean";

  // bench
  std::string config;
  std::string svg;

  // plot
  std::string kind = "auto";
  std::string title;
};

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw IoError("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

nlohmann::json read_json(const std::filesystem::path& path) {
  try {
    return nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

int cmd_gen_sphere(const Options& o) {
  SphereSpec spec;
  spec.n = o.n;
  spec.r0 = o.r0;
  spec.radial_noise = RadialNoise::parse(o.radial_noise);
  spec.mode = o.mode == "lattice" ? SphereMode::lattice : SphereMode::random;
  spec.seed = o.seed;
  save_csv(gen_semisphere(spec), o.output);
  return kExitOk;
}

int cmd_gen_mnist(const Options& o) {
  const std::set<int> digits(o.digits.begin(), o.digits.end());
  save_csv(load_idx(o.images, o.labels, digits, o.count, o.seed), o.output, "px");
  return kExitOk;
}

int cmd_noise(const Options& o) {
  const PointCloud in = load_csv(o.input);
  save_csv(add_gaussian_pixel_noise(in, {o.sigma, o.seed}), o.output);
  return kExitOk;
}

int cmd_embed(const Options& o) {
  const PointCloud cloud = load_csv(o.input);
  EmbedResult result;
  nlohmann::json params;
  if (o.method == "mds") {
    result = run_mds(cloud, o.p);
    params = {{"p", o.p}};
  } else if (o.method == "isomap") {
    result = run_isomap(cloud, o.delta, o.p, o.largest_component);
    params = {{"delta", o.delta}, {"p", o.p}, {"largest_component", o.largest_component}};
  } else {
    SgeParams sp;
    sp.delta = o.delta;
    sp.mu_s = o.mu_s;
    sp.nu = o.nu;
    sp.h = o.h;
    sp.p = o.p;
    sp.fallback_only = o.fallback_only;
    sp.largest_component = o.largest_component;
    result = run_sge(cloud, sp);
    params = {{"delta", o.delta}, {"mu_s", o.mu_s}, {"nu", o.nu}, {"h", o.h}, {"p", o.p},
              {"fallback_only", o.fallback_only}, {"largest_component", o.largest_component}};
  }
  std::optional<std::vector<int>> labels;
  if (cloud.has_labels()) {
    labels.emplace();
    for (Index i : result.diagnostics.kept) labels->push_back((*cloud.labels())[static_cast<std::size_t>(i)]);
  }
  save_csv(result.embedding.as_cloud(std::move(labels)), o.output, "e");
  if (!o.report.empty()) write_text(o.report, diagnostics_json(result, params).dump(2) + "\n");
  return kExitOk;
}

int cmd_eval_mad(const Options& o, std::ostream& out) {
  const PointCloud ref = load_csv(o.ref);
  const PointCloud emb = load_csv(o.emb);
  if (ref.size() != emb.size()) {
    throw InvalidArgument("reference has " + std::to_string(ref.size()) + " rows but embedding has " +
                          std::to_string(emb.size()));
  }
  ErrorReport r;
  r.kind = ErrorReport::Kind::mad;
  r.method = "mad";
  r.params = {{"truth", o.truth}};
  const Matrix truth = o.truth == "great-circle" ? great_circle_dists(ref, o.r0) : pairwise_euclidean(ref);
  if (o.truth == "great-circle") r.params["r0"] = o.r0;
  r.value = mad(truth, pairwise_euclidean(emb));
  out << r.to_json().dump(2) << "\n";
  return kExitOk;
}

int cmd_eval_adjacency(const Options& o, std::ostream& out) {
  ErrorReport r;
  r.kind = ErrorReport::Kind::adjacency;
  r.method = "adjacency";
  r.params = {{"delta", o.delta}};
  r.value = adjacency_error(load_csv(o.orig), load_csv(o.emb), o.delta);
  out << r.to_json().dump(2) << "\n";
  return kExitOk;
}

int cmd_bench(const Options& o, std::ostream& err) {
  SweepConfig cfg = SweepConfig::from_json(read_json(o.config));
  if (o.largest_component) cfg.largest_component = true;
  const StudyReport report = run_study(cfg);
  const nlohmann::json j = report.to_json();
  write_text(o.output, j.dump(2) + "\n");
  for (const auto& cell : report.cells) {
    if (cell.failed) err << "warning: cell " << cell.params.dump() << " had failed realizations\n";
  }
  if (!o.svg.empty()) write_text(o.svg, svg::plot_report(j));
  return kExitOk;
}

int cmd_plot(const Options& o) {
  std::string kind = o.kind;
  if (kind == "auto") kind = std::filesystem::path(o.input).extension() == ".json" ? "report" : "scatter";
  if (kind == "scatter") {
    const PointCloud cloud = load_csv(o.input);
    write_text(o.output, svg::scatter(cloud.points(), cloud.labels(), o.title.empty() ? "embedding" : o.title));
    return kExitOk;
  }
  const nlohmann::json report = read_json(o.input);
  if (kind == "heatmap" && report.value("study", std::string()) != "sphere_sweep") {
    throw InvalidArgument("heatmap plots need a sphere_sweep report");
  }
  if (kind == "lines" && report.value("study", std::string()) == "sphere_sweep") {
    throw InvalidArgument("line plots need a sparsity, noise or image report");
  }
  write_text(o.output, svg::plot_report(report));
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Smooth geodesic embedding toolkit"};
  app.name("sge");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", SGE_VERSION);
  app.add_option("--threads", o.threads, "Worker threads for library calls")->check(CLI::Range(1u, 1024u));

  auto* gen = app.add_subcommand("gen", "Generate a dataset");
  gen->require_subcommand(1);
  auto* sphere = gen->add_subcommand("sphere", "Semi-sphere point cloud");
  sphere->add_option("--n", o.n, "Point count")->capture_default_str();
  sphere->add_option("--r0", o.r0, "Nominal radius")->capture_default_str();
  sphere->add_option("--radial-noise", o.radial_noise, "none | gaussian:SIGMA | uniform:ETA")->capture_default_str();
  sphere->add_option("--mode", o.mode, "Angle sampling")->check(CLI::IsMember({"random", "lattice"}))->capture_default_str();
  sphere->add_option("--seed", o.seed, "PRNG seed")->required();
  sphere->add_option("-o,--out", o.output, "Output CSV")->required();

  auto* mnist = gen->add_subcommand("mnist", "Sample MNIST digits from IDX files");
  mnist->add_option("--images", o.images, "IDX image file")->required();
  mnist->add_option("--labels", o.labels, "IDX label file")->required();
  mnist->add_option("--digits", o.digits, "Digits to keep")->delimiter(',')->capture_default_str();
  mnist->add_option("--count", o.count, "Sample size")->capture_default_str();
  mnist->add_option("--seed", o.seed, "PRNG seed")->required();
  mnist->add_option("-o,--out", o.output, "Output CSV")->required();

  auto* noise = app.add_subcommand("noise", "Add Gaussian pixel noise");
  noise->add_option("--sigma", o.sigma, "Noise standard deviation")->required()->check(CLI::NonNegativeNumber);
  noise->add_option("--seed", o.seed, "PRNG seed")->required();
  noise->add_option("-i,--input", o.input, "Input CSV")->required();
  noise->add_option("-o,--out", o.output, "Output CSV")->required();

  auto* embed = app.add_subcommand("embed", "Embed a point cloud");
  embed->set_help_flag("--help", "Print this help message and exit");
  embed->add_option("--method", o.method, "Embedding method")
      ->check(CLI::IsMember({"mds", "isomap", "sge"}))
      ->capture_default_str();
  embed->add_option("-i,--input", o.input, "Input CSV")->required();
  embed->add_option("--delta", o.delta, "Nearest neighbors per point")->capture_default_str();
  embed->add_option("--mu-s", o.mu_s, "Smoothing multiplier")->capture_default_str();
  embed->add_option("--nu", o.nu, "Spline threshold percentage")->capture_default_str();
  embed->add_option("--h", o.h, "Length discretization count")->capture_default_str();
  embed->add_option("--p", o.p, "Embedding dimension")->capture_default_str();
  embed->add_option("-o,--out", o.output, "Embedding CSV")->required();
  embed->add_option("--report", o.report, "Diagnostics JSON");
  embed->add_flag("--fallback-only", o.fallback_only, "Use geodesic lengths for every pair");
  embed->add_flag("--largest-component", o.largest_component, "Embed only the largest graph component");

  auto* eval = app.add_subcommand("eval", "Error metrics (JSON on stdout)");
  eval->require_subcommand(1);
  auto* eval_mad = eval->add_subcommand("mad", "Mean absolute deviation of pairwise distances");
  eval_mad->add_option("--ref", o.ref, "Reference cloud CSV")->required();
  eval_mad->add_option("--emb", o.emb, "Embedding CSV")->required();
  eval_mad->add_option("--truth", o.truth, "Reference distances")
      ->check(CLI::IsMember({"euclidean", "great-circle"}))
      ->capture_default_str();
  eval_mad->add_option("--r0", o.r0, "Nominal radius for great-circle truth")->capture_default_str();
  auto* eval_adj = eval->add_subcommand("adjacency", "Adjacency-distance error");
  eval_adj->add_option("--orig", o.orig, "Original cloud CSV")->required();
  eval_adj->add_option("--emb", o.emb, "Embedding CSV")->required();
  eval_adj->add_option("--delta", o.delta, "Nearest neighbors per point")->required();

  auto* bench = app.add_subcommand("bench", "Run an experiment from a JSON config");
  bench->add_option("--config", o.config, "SweepConfig JSON")->required();
  bench->add_option("-o,--out", o.output, "Report JSON")->required();
  bench->add_option("--svg", o.svg, "Also plot the report");
  bench->add_flag("--largest-component", o.largest_component, "Embed only the largest graph component");

  auto* plot = app.add_subcommand("plot", "Render an SVG chart");
  plot->add_option("--kind", o.kind, "auto | scatter | heatmap | lines | report")->capture_default_str();
  plot->add_option("-i,--input", o.input, "Embedding CSV or report JSON")->required();
  plot->add_option("-o,--out", o.output, "Output SVG")->required();
  plot->add_option("--title", o.title, "Chart title");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  set_thread_count(o.threads);
  try {
    if (plot->parsed()) {
      static const std::set<std::string> kinds = {"auto", "scatter", "heatmap", "lines", "report"};
      if (!kinds.count(o.kind)) throw InvalidArgument("unknown plot kind '" + o.kind + "'");
      return cmd_plot(o);
    }
    if (sphere->parsed()) return cmd_gen_sphere(o);
    if (mnist->parsed()) return cmd_gen_mnist(o);
    if (noise->parsed()) return cmd_noise(o);
    if (embed->parsed()) return cmd_embed(o);
    if (eval_mad->parsed()) return cmd_eval_mad(o, out);
    if (eval_adj->parsed()) return cmd_eval_adjacency(o, out);
    if (bench->parsed()) return cmd_bench(o, err);
  } catch (const DisconnectedGraphError& e) {
    err << "error: " << e.what() << "\n"
        << "hint: increase --delta or pass --largest-component to embed the largest component only\n";
    return kExitDisconnected;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace sge::cli

#include "sge/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "sge/data.hpp"
#include "sge/embed.hpp"
#include "sge/metrics.hpp"
#include "sge/parallel.hpp"

#ifndef SGE_VERSION
#define SGE_VERSION "0.0.0"
#endif

namespace sge {
namespace {

struct Method {
  bool isomap = false;
  Index delta = 0;
  double mu_s = 0.0;
};

/// One embedding input of a realization plus how to score its embedding.
struct Case {
  PointCloud input;
  std::function<double(const EmbedResult&)> score;
};

using CaseFactory = std::function<std::vector<Case>(std::uint64_t child_seed)>;

std::vector<Method> method_list(const SweepConfig& cfg) {
  std::vector<Method> out;
  for (Index delta : cfg.deltas) {
    if (cfg.include_isomap) out.push_back({true, delta, 0.0});
    for (double mu : cfg.mu_s) out.push_back({false, delta, mu});
  }
  return out;
}

nlohmann::json method_params(const Method& m) {
  nlohmann::json j;
  j["method"] = m.isomap ? "isomap" : "sge";
  j["delta"] = m.delta;
  if (!m.isomap) j["mu_s"] = m.mu_s;
  return j;
}

std::string number_tag(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string scatter_name(const nlohmann::json& outer, const Method& m) {
  std::string name = "scatter";
  for (const auto& [key, value] : outer.items()) name += "_" + key + number_tag(value.get<double>());
  name += "_d" + std::to_string(m.delta) + (m.isomap ? "_isomap" : "_sge_mu" + number_tag(m.mu_s));
  return name + ".csv";
}

Matrix restrict(const Matrix& full, const std::vector<Index>& kept) {
  if (static_cast<Index>(kept.size()) == full.rows()) return full;
  const Index k = static_cast<Index>(kept.size());
  Matrix out(k, k);
  for (Index a = 0; a < k; ++a) {
    for (Index b = 0; b < k; ++b) out(a, b) = full(kept[static_cast<std::size_t>(a)], kept[static_cast<std::size_t>(b)]);
  }
  return out;
}

EmbedResult embed_with(const PointCloud& cloud, const Method& m, const SweepConfig& cfg) {
  if (m.isomap) return run_isomap(cloud, m.delta, cfg.p, cfg.largest_component);
  SgeParams params;
  params.delta = m.delta;
  params.mu_s = m.mu_s;
  params.nu = cfg.nu;
  params.h = cfg.h;
  params.p = cfg.p;
  params.fallback_only = cfg.fallback_only;
  params.largest_component = cfg.largest_component;
  return run_sge(cloud, params);
}

void aggregate(CellRecord& cell) {
  std::vector<double> ok;
  for (const auto& e : cell.errors) {
    if (e) ok.push_back(*e);
  }
  cell.failed = ok.size() != cell.errors.size();
  if (ok.empty()) return;
  const double mean = std::accumulate(ok.begin(), ok.end(), 0.0) / static_cast<double>(ok.size());
  double ss = 0.0;
  for (double v : ok) ss += (v - mean) * (v - mean);
  cell.mean = mean;
  cell.stddev = ok.size() > 1 ? std::sqrt(ss / static_cast<double>(ok.size() - 1)) : 0.0;
}

StudyReport run_engine(const SweepConfig& cfg, const std::vector<nlohmann::json>& outer,
                       const CaseFactory& make_cases) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();
  const auto methods = method_list(cfg);
  const std::size_t n_real = static_cast<std::size_t>(cfg.realizations);
  const std::size_t n_cells = outer.size() * methods.size();

  // results[r][cell]
  std::vector<std::vector<std::optional<double>>> results(n_real);
  std::vector<std::vector<std::string>> failures(n_real);

  const auto run_one = [&](std::size_t r) {
    const std::uint64_t child = cfg.base_seed + r;
    auto& row = results[r];
    row.assign(n_cells, std::nullopt);
    failures[r].assign(n_cells, std::string());
    const std::vector<Case> cases = make_cases(child);
    for (std::size_t g = 0; g < cases.size(); ++g) {
      for (std::size_t k = 0; k < methods.size(); ++k) {
        const std::size_t cell = g * methods.size() + k;
        try {
          const EmbedResult res = embed_with(cases[g].input, methods[k], cfg);
          row[cell] = cases[g].score(res);
          if (r == 0 && !cfg.scatter_dir.empty()) {
            std::optional<std::vector<int>> labels;
            if (cases[g].input.has_labels()) {
              labels.emplace();
              for (Index i : res.diagnostics.kept) labels->push_back((*cases[g].input.labels())[static_cast<std::size_t>(i)]);
            }
            std::filesystem::create_directories(cfg.scatter_dir);
            save_csv(res.embedding.as_cloud(std::move(labels)),
                     std::filesystem::path(cfg.scatter_dir) / scatter_name(outer[g], methods[k]), "e");
          }
        } catch (const DisconnectedGraphError& e) {
          failures[r][cell] = e.what();
        } catch (const NumericalError& e) {
          failures[r][cell] = e.what();
        }
      }
    }
  };

  if (n_real > 1 && thread_count() > 1) {
    parallel_for(n_real, run_one);
  } else {
    for (std::size_t r = 0; r < n_real; ++r) run_one(r);
  }

  StudyReport report;
  report.config = cfg;
  for (std::size_t r = 0; r < n_real; ++r) report.seeds.push_back(cfg.base_seed + r);
  for (std::size_t g = 0; g < outer.size(); ++g) {
    for (std::size_t k = 0; k < methods.size(); ++k) {
      const std::size_t cell = g * methods.size() + k;
      CellRecord rec;
      rec.params = outer[g];
      rec.params.update(method_params(methods[k]));
      for (std::size_t r = 0; r < n_real; ++r) {
        rec.errors.push_back(results[r][cell]);
        if (!failures[r][cell].empty()) {
          rec.failures.push_back("realization " + std::to_string(r) + ": " + failures[r][cell]);
        }
      }
      aggregate(rec);
      report.cells.push_back(std::move(rec));
    }
  }

  for (std::size_t g = 0; g < outer.size(); ++g) {
    for (std::size_t k = 0; k < methods.size(); ++k) {
      if (methods[k].isomap) continue;
      const CellRecord& sge_cell = report.cells[g * methods.size() + k];
      for (std::size_t q = 0; q < methods.size(); ++q) {
        if (!methods[q].isomap || methods[q].delta != methods[k].delta) continue;
        const CellRecord& iso_cell = report.cells[g * methods.size() + q];
        nlohmann::json entry = outer[g];
        entry["delta"] = methods[k].delta;
        entry["mu_s"] = methods[k].mu_s;
        if (iso_cell.mean && sge_cell.mean) {
          entry["e_isomap"] = *iso_cell.mean;
          entry["e_sge"] = *sge_cell.mean;
          entry["diff"] = *iso_cell.mean - *sge_cell.mean;
        } else {
          entry["diff"] = nullptr;
        }
        report.surface.push_back(std::move(entry));
      }
    }
  }
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Case sphere_case(PointCloud cloud, double r0) {
  auto truth = std::make_shared<Matrix>(great_circle_dists(cloud, r0));
  return {std::move(cloud), [truth](const EmbedResult& res) {
            return mad(restrict(*truth, res.diagnostics.kept), pairwise_euclidean(res.embedding.as_cloud()));
          }};
}

PointCloud sample_rows(const PointCloud& cloud, Index count, std::uint64_t seed) {
  if (count >= cloud.size()) return cloud;
  std::vector<Index> idx(static_cast<std::size_t>(cloud.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < static_cast<std::size_t>(count); ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, idx.size() - 1);
    std::swap(idx[k], idx[pick(rng)]);
  }
  idx.resize(static_cast<std::size_t>(count));
  std::sort(idx.begin(), idx.end());
  return cloud.subset(idx);
}

template <typename T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

Study parse_study(const std::string& name) {
  if (name == "sphere_sweep") return Study::sphere_sweep;
  if (name == "sparsity") return Study::sparsity;
  if (name == "noise") return Study::noise;
  if (name == "image") return Study::image;
  throw InvalidArgument("unknown study '" + name + "' (expected sphere_sweep, sparsity, noise or image)");
}

std::string study_name(Study s) {
  switch (s) {
    case Study::sphere_sweep: return "sphere_sweep";
    case Study::sparsity: return "sparsity";
    case Study::noise: return "noise";
    case Study::image: return "image";
  }
  return "unknown";
}

SweepConfig SweepConfig::from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {
      "study", "deltas", "mu_s", "ns", "etas", "sigmas", "n", "sigma_r", "realizations", "base_seed",
      "nu", "h", "p", "r0", "fallback_only", "include_isomap", "largest_component", "images", "labels",
      "csv", "digits", "count", "scatter_dir"};
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw InvalidArgument("unknown config key '" + key + "'");
  }
  if (!j.contains("study")) throw InvalidArgument("config is missing 'study'");
  if (!j.contains("base_seed")) throw InvalidArgument("config is missing 'base_seed' (seeds are never implicit)");

  SweepConfig c;
  c.study = parse_study(j.at("study").get<std::string>());
  switch (c.study) {
    case Study::sphere_sweep:
      c.deltas = {3, 5};
      c.mu_s = {0.0, 1.0};
      c.n = 300;
      c.sigma_r = 3.0;
      c.largest_component = true;
      break;
    case Study::sparsity:
      c.ns = {200, 400, 600};
      c.deltas = {3};
      c.mu_s = {1.0};
      c.sigma_r = 2.0;
      c.largest_component = true;
      break;
    case Study::noise:
      c.etas = {0.0, 0.9, 1.8, 2.7};
      c.n = 400;
      c.deltas = {3};
      c.mu_s = {1.0};
      c.largest_component = true;
      break;
    case Study::image:
      c.sigmas = {0.0, 0.2};
      c.deltas = {4};
      c.mu_s = {0.0, 0.6};
      break;
  }
  try {
    read_key(j, "deltas", c.deltas);
    read_key(j, "mu_s", c.mu_s);
    read_key(j, "ns", c.ns);
    read_key(j, "etas", c.etas);
    read_key(j, "sigmas", c.sigmas);
    read_key(j, "n", c.n);
    read_key(j, "sigma_r", c.sigma_r);
    read_key(j, "realizations", c.realizations);
    read_key(j, "base_seed", c.base_seed);
    read_key(j, "nu", c.nu);
    read_key(j, "h", c.h);
    read_key(j, "p", c.p);
    read_key(j, "r0", c.r0);
    read_key(j, "fallback_only", c.fallback_only);
    read_key(j, "include_isomap", c.include_isomap);
    read_key(j, "largest_component", c.largest_component);
    read_key(j, "images", c.images);
    read_key(j, "labels", c.labels);
    read_key(j, "csv", c.csv);
    read_key(j, "digits", c.digits);
    read_key(j, "count", c.count);
    read_key(j, "scatter_dir", c.scatter_dir);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json SweepConfig::to_json() const {
  nlohmann::json j;
  j["study"] = study_name(study);
  j["deltas"] = deltas;
  j["mu_s"] = mu_s;
  if (study == Study::sparsity) j["ns"] = ns;
  if (study == Study::noise) j["etas"] = etas;
  if (study == Study::image) j["sigmas"] = sigmas;
  if (study == Study::sphere_sweep || study == Study::noise) j["n"] = n;
  if (study == Study::sphere_sweep || study == Study::sparsity) j["sigma_r"] = sigma_r;
  j["realizations"] = realizations;
  j["base_seed"] = base_seed;
  j["nu"] = nu;
  j["h"] = h;
  j["p"] = p;
  j["r0"] = r0;
  j["fallback_only"] = fallback_only;
  j["include_isomap"] = include_isomap;
  j["largest_component"] = largest_component;
  if (study == Study::image) {
    j["images"] = images;
    j["labels"] = labels;
    j["csv"] = csv;
    j["digits"] = digits;
    j["count"] = count;
    j["scatter_dir"] = scatter_dir;
  }
  return j;
}

void SweepConfig::validate() const {
  const auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw InvalidArgument(msg);
  };
  need(!deltas.empty(), "deltas grid is empty");
  need(!mu_s.empty() || include_isomap, "no methods selected (mu_s empty and include_isomap false)");
  need(realizations >= 1, "realizations must be >= 1");
  for (Index d : deltas) need(d >= 1, "every delta must be >= 1");
  for (double m : mu_s) need(m >= 0.0 && std::isfinite(m), "every mu_s must be finite and >= 0");
  need(nu >= 0.0, "nu must be >= 0");
  need(h >= 2, "h must be >= 2");
  need(p >= 1, "p must be >= 1");
  need(r0 > 0.0, "r0 must be positive");
  const Index max_delta = *std::max_element(deltas.begin(), deltas.end());
  switch (study) {
    case Study::sphere_sweep:
      need(n > max_delta, "n must exceed every delta");
      need(sigma_r >= 0.0, "sigma_r must be >= 0");
      break;
    case Study::sparsity:
      need(!ns.empty(), "ns grid is empty");
      for (Index v : ns) need(v > max_delta, "every n must exceed every delta");
      need(sigma_r >= 0.0, "sigma_r must be >= 0");
      break;
    case Study::noise:
      need(!etas.empty(), "etas grid is empty");
      for (double e : etas) need(e >= 0.0, "every eta must be >= 0");
      lattice_shape(n);
      need(n > max_delta, "n must exceed every delta");
      break;
    case Study::image:
      need(!sigmas.empty(), "sigmas grid is empty");
      for (double s : sigmas) need(s >= 0.0, "every sigma must be >= 0");
      need(!csv.empty() || (!images.empty() && !labels.empty()),
           "image study needs 'images' and 'labels' IDX paths or a 'csv' path");
      need(count > max_delta, "count must exceed every delta");
      break;
  }
}

nlohmann::json StudyReport::to_json(bool include_timing) const {
  nlohmann::json j;
  j["study"] = study_name(config.study);
  j["config"] = config.to_json();
  nlohmann::json cells_json = nlohmann::json::array();
  for (const auto& c : cells) {
    nlohmann::json cj;
    cj["params"] = c.params;
    nlohmann::json errs = nlohmann::json::array();
    for (const auto& e : c.errors) errs.push_back(e ? nlohmann::json(*e) : nlohmann::json(nullptr));
    cj["errors"] = errs;
    cj["mean"] = c.mean ? nlohmann::json(*c.mean) : nlohmann::json(nullptr);
    cj["std"] = c.stddev ? nlohmann::json(*c.stddev) : nlohmann::json(nullptr);
    cj["failed"] = c.failed;
    if (!c.failures.empty()) cj["failures"] = c.failures;
    cells_json.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells_json);
  j["seeds"] = seeds;
  j["surface"] = surface;
  j["version"] = SGE_VERSION;
  if (config.study == Study::image) {
    j["provenance"] = {{"sample_reuse", "one clean sample per realization, shared by every sigma level"},
                       {"reference", "adjacency of the clean sample"}};
  }
  if (include_timing) j["wall_time_ms"] = wall_time_ms;
  return j;
}

StudyReport run_sphere_sweep(const SweepConfig& cfg) {
  if (cfg.study != Study::sphere_sweep) throw InvalidArgument("config study is not sphere_sweep");
  return run_engine(cfg, {nlohmann::json::object()}, [&](std::uint64_t seed) {
    SphereSpec spec;
    spec.n = cfg.n;
    spec.r0 = cfg.r0;
    spec.radial_noise = RadialNoise::gaussian(cfg.sigma_r);
    spec.seed = seed;
    return std::vector<Case>{sphere_case(gen_semisphere(spec), cfg.r0)};
  });
}

StudyReport run_sparsity_study(const SweepConfig& cfg) {
  if (cfg.study != Study::sparsity) throw InvalidArgument("config study is not sparsity");
  std::vector<nlohmann::json> outer;
  for (Index n : cfg.ns) outer.push_back({{"n", n}});
  return run_engine(cfg, outer, [&](std::uint64_t seed) {
    SphereSpec spec;
    spec.n = *std::max_element(cfg.ns.begin(), cfg.ns.end());
    spec.r0 = cfg.r0;
    spec.radial_noise = RadialNoise::gaussian(cfg.sigma_r);
    spec.seed = seed;
    const PointCloud full = gen_semisphere(spec);
    std::vector<Case> cases;
    for (Index n : cfg.ns) {
      std::vector<Index> prefix(static_cast<std::size_t>(n));
      std::iota(prefix.begin(), prefix.end(), Index{0});
      cases.push_back(sphere_case(full.subset(prefix), cfg.r0));
    }
    return cases;
  });
}

StudyReport run_noise_study(const SweepConfig& cfg) {
  if (cfg.study != Study::noise) throw InvalidArgument("config study is not noise");
  std::vector<nlohmann::json> outer;
  for (double eta : cfg.etas) outer.push_back({{"eta", eta}});
  return run_engine(cfg, outer, [&](std::uint64_t seed) {
    std::vector<Case> cases;
    for (double eta : cfg.etas) {
      SphereSpec spec;
      spec.n = cfg.n;
      spec.r0 = cfg.r0;
      spec.mode = SphereMode::lattice;
      spec.radial_noise = RadialNoise::uniform(eta);
      spec.seed = seed;
      cases.push_back(sphere_case(gen_semisphere(spec), cfg.r0));
    }
    return cases;
  });
}

StudyReport run_image_study(const SweepConfig& cfg) {
  if (cfg.study != Study::image) throw InvalidArgument("config study is not image");
  cfg.validate();
  const auto check_file = [](const std::string& path) {
    if (!std::filesystem::exists(path)) {
      throw IoError("dataset file " + path +
                    " not found; fetch MNIST (train-images-idx3-ubyte, train-labels-idx1-ubyte) "
                    "or run tools/fetch_mnist_subset.py to build an IDX subset");
    }
  };
  std::optional<PointCloud> csv_cloud;
  if (!cfg.csv.empty()) {
    check_file(cfg.csv);
    csv_cloud = load_csv(cfg.csv);
  } else {
    check_file(cfg.images);
    check_file(cfg.labels);
  }
  const std::set<int> digits(cfg.digits.begin(), cfg.digits.end());

  std::vector<nlohmann::json> outer;
  for (double s : cfg.sigmas) outer.push_back({{"sigma", s}});
  return run_engine(cfg, outer, [&](std::uint64_t seed) {
    const PointCloud clean = csv_cloud ? sample_rows(*csv_cloud, cfg.count, seed)
                                       : load_idx(cfg.images, cfg.labels, digits, cfg.count, seed);
    auto reference = std::make_shared<PointCloud>(clean);
    std::vector<Case> cases;
    for (double sigma : cfg.sigmas) {
      PointCloud input = sigma > 0.0 ? add_gaussian_pixel_noise(clean, {sigma, seed + 1}) : clean;
      cases.push_back({std::move(input), [reference](const EmbedResult& res) {
                         const auto& kept = res.diagnostics.kept;
                         const PointCloud orig = static_cast<Index>(kept.size()) == reference->size()
                                                     ? *reference
                                                     : reference->subset(kept);
                         const Index delta = res.diagnostics.delta;
                         return adjacency_error(orig, res.embedding.as_cloud(), delta);
                       }});
    }
    return cases;
  });
}

StudyReport run_study(const SweepConfig& cfg) {
  switch (cfg.study) {
    case Study::sphere_sweep: return run_sphere_sweep(cfg);
    case Study::sparsity: return run_sparsity_study(cfg);
    case Study::noise: return run_noise_study(cfg);
    case Study::image: return run_image_study(cfg);
  }
  throw InvalidArgument("unknown study");
}

}  // namespace sge

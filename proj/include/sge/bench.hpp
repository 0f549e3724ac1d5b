#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sge/point_cloud.hpp"

namespace sge {

enum class Study { sphere_sweep, sparsity, noise, image };

Study parse_study(const std::string& name);
std::string study_name(Study s);

/// Experiment description. Every study crosses its own grid (n, eta or sigma)
/// with `deltas`, and runs Isomap once per delta plus SGE once per (delta, mu_s).
struct SweepConfig {
  Study study = Study::sphere_sweep;
  std::vector<Index> deltas;
  std::vector<double> mu_s;
  std::vector<Index> ns;        ///< sparsity
  std::vector<double> etas;     ///< noise: uniform radial amplitude
  std::vector<double> sigmas;   ///< image: pixel noise
  Index n = 600;                ///< sphere_sweep and noise
  double sigma_r = 3.0;         ///< gaussian radial noise (sphere_sweep, sparsity)
  Index realizations = 1;
  std::uint64_t base_seed = 0;
  double nu = 10.0;
  Index h = 100;
  Index p = 2;
  double r0 = 20.0;
  bool fallback_only = false;
  bool include_isomap = true;
  /// Embed only the largest graph component. On by default for the sphere
  /// studies, whose lattices and sparse samples detach polar clusters.
  bool largest_component = false;
  // image study inputs
  std::string images;
  std::string labels;
  std::string csv;
  std::vector<int> digits{2};
  Index count = 400;
  /// When set, realization 0 writes one labelled embedding CSV per cell here.
  std::string scatter_dir;

  /// Defaults per study, overridden by the keys present in `j`. Unknown keys
  /// are rejected.
  static SweepConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;
};

struct CellRecord {
  nlohmann::json params;
  /// One entry per realization; nullopt where the run failed.
  std::vector<std::optional<double>> errors;
  std::optional<double> mean;
  std::optional<double> stddev;  ///< sample standard deviation; 0 for a single value
  bool failed = false;
  std::vector<std::string> failures;
};

struct StudyReport {
  SweepConfig config;
  std::vector<CellRecord> cells;
  std::vector<std::uint64_t> seeds;
  /// E_I - E_S of the means, one entry per SGE cell with a matching Isomap cell.
  nlohmann::json surface = nlohmann::json::array();
  double wall_time_ms = 0.0;

  nlohmann::json to_json(bool include_timing = true) const;
};

StudyReport run_sphere_sweep(const SweepConfig& cfg);
StudyReport run_sparsity_study(const SweepConfig& cfg);
StudyReport run_noise_study(const SweepConfig& cfg);
StudyReport run_image_study(const SweepConfig& cfg);
StudyReport run_study(const SweepConfig& cfg);

}  // namespace sge

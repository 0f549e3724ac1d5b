#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "sge/point_cloud.hpp"

namespace sge {

/// Perturbation of the nominal radius, one fresh draw per point.
struct RadialNoise {
  enum class Kind { none, gaussian, uniform };
  Kind kind = Kind::none;
  /// sigma for gaussian, eta for uniform (r = r0 + eta * U[-1, 1]).
  double scale = 0.0;

  static RadialNoise none() { return {}; }
  static RadialNoise gaussian(double sigma) { return {Kind::gaussian, sigma}; }
  static RadialNoise uniform(double eta) { return {Kind::uniform, eta}; }

  /// Parses "none", "gaussian:3.0" or "uniform:0.9".
  static RadialNoise parse(std::string_view text);
  std::string to_string() const;
};

enum class SphereMode { random, lattice };

struct SphereSpec {
  Index n = 600;
  double r0 = 20.0;
  RadialNoise radial_noise;
  SphereMode mode = SphereMode::random;
  std::uint64_t seed = 0;

  void validate() const;
};

struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Grid shape (a, b) with a * b == n and a, b >= 2 used by lattice mode: a counts
/// latitude rows, b longitude columns. Picks the most square factorization,
/// preferring the larger a on ties. Throws InvalidArgument when none exists.
std::pair<Index, Index> lattice_shape(Index n);

/// Semi-sphere y = r (cos g1 cos g2, cos g1 sin g2, sin g1) with g1 in
/// [-pi/2, pi/2] and g2 in [0, pi]. Random mode draws (g1, g2, noise) per
/// point in sequence, so a larger n extends a smaller one row-for-row.
/// Lattice mode uses cell-centred angles on an a x b grid.
PointCloud gen_semisphere(const SphereSpec& spec);

/// CSV with a header line; a column named "label" becomes integer labels.
PointCloud load_csv(const std::filesystem::path& path);
PointCloud parse_csv(std::istream& in);

/// Writes `prefix1,...,prefixd[,label]` then one row per point, 17 significant digits.
void save_csv(const PointCloud& cloud, const std::filesystem::path& path,
              std::string_view prefix = "c");
void write_csv(const PointCloud& cloud, std::ostream& out, std::string_view prefix = "c");

/// MNIST-style IDX pair. Pixels are scaled to [0, 1], images are filtered to
/// `keep_digits`, and `count` of them are sampled without replacement using
/// `seed`. Sampled images keep their file order.
PointCloud load_idx(const std::filesystem::path& images_path,
                    const std::filesystem::path& labels_path, const std::set<int>& keep_digits,
                    Index count, std::uint64_t seed);

/// Adds i.i.d. N(0, sigma^2) to every entry. No clamping.
PointCloud add_gaussian_pixel_noise(const PointCloud& cloud, const NoiseSpec& noise);

}  // namespace sge

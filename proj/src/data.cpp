#include "sge/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

namespace sge {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

double parse_double(std::string_view cell, std::size_t line) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (cell.empty() || ec != std::errc() || ptr != last) {
    throw ParseError("non-numeric cell '" + std::string(cell) + "'", line);
  }
  if (!std::isfinite(value)) throw ParseError("non-finite value '" + std::string(cell) + "'", line);
  return value;
}

int parse_label(std::string_view cell, std::size_t line) {
  // Labels written as floats ("2.0") are accepted when integral.
  const double v = parse_double(cell, line);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw ParseError("label '" + std::string(cell) + "' is not an integer", line);
  }
  return static_cast<int>(v);
}

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<unsigned char>& buf, std::size_t offset,
                        const std::filesystem::path& path) {
  if (offset + 4 > buf.size()) throw ParseError("truncated IDX header in " + path.string(), 0);
  return (std::uint32_t{buf[offset]} << 24) | (std::uint32_t{buf[offset + 1]} << 16) |
         (std::uint32_t{buf[offset + 2]} << 8) | std::uint32_t{buf[offset + 3]};
}

}  // namespace

RadialNoise RadialNoise::parse(std::string_view text) {
  if (text == "none") return none();
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidArgument("radial noise must be none, gaussian:<sigma> or uniform:<eta>");
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string_view value = text.substr(colon + 1);
  double scale = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), scale);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(scale) ||
      scale < 0.0) {
    throw InvalidArgument("bad radial noise scale '" + std::string(value) + "'");
  }
  if (kind == "gaussian") return gaussian(scale);
  if (kind == "uniform") return uniform(scale);
  throw InvalidArgument("unknown radial noise kind '" + std::string(kind) + "'");
}

std::string RadialNoise::to_string() const {
  char buf[64];
  switch (kind) {
    case Kind::none:
      return "none";
    case Kind::gaussian:
      std::snprintf(buf, sizeof buf, "gaussian:%.17g", scale);
      return buf;
    case Kind::uniform:
      std::snprintf(buf, sizeof buf, "uniform:%.17g", scale);
      return buf;
  }
  return "none";
}

void SphereSpec::validate() const {
  if (n < 4) throw InvalidArgument("sphere needs n >= 4");
  if (!(r0 > 0.0) || !std::isfinite(r0)) throw InvalidArgument("sphere radius r0 must be > 0");
  if (!(radial_noise.scale >= 0.0) || !std::isfinite(radial_noise.scale)) {
    throw InvalidArgument("radial noise scale must be finite and >= 0");
  }
}

std::pair<Index, Index> lattice_shape(Index n) {
  // Angle ranges are both pi, so equal spacing means a == b; minimise |a - b|.
  Index best_a = 0, best_b = 0;
  for (Index a = 2; a <= n / 2; ++a) {
    if (n % a != 0) continue;
    const Index b = n / a;
    if (b < 2) continue;
    const Index gap = a > b ? a - b : b - a;
    const Index best_gap = best_a > best_b ? best_a - best_b : best_b - best_a;
    if (best_a == 0 || gap < best_gap || (gap == best_gap && a > best_a)) {
      best_a = a;
      best_b = b;
    }
  }
  if (best_a == 0) {
    throw InvalidArgument("lattice mode needs n = a*b with a, b >= 2; got n = " +
                          std::to_string(n));
  }
  return {best_a, best_b};
}

PointCloud gen_semisphere(const SphereSpec& spec) {
  spec.validate();
  constexpr double pi = std::numbers::pi;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> lat(-pi / 2.0, pi / 2.0);
  std::uniform_real_distribution<double> lon(0.0, pi);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto radius = [&] {
    switch (spec.radial_noise.kind) {
      case RadialNoise::Kind::gaussian:
        return spec.r0 + spec.radial_noise.scale * gauss(rng);
      case RadialNoise::Kind::uniform:
        return spec.r0 + spec.radial_noise.scale * unit(rng);
      case RadialNoise::Kind::none:
        break;
    }
    return spec.r0;
  };

  RowMatrix pts(spec.n, 3);
  auto place = [&](Index row, double g1, double g2, double r) {
    pts(row, 0) = r * std::cos(g1) * std::cos(g2);
    pts(row, 1) = r * std::cos(g1) * std::sin(g2);
    pts(row, 2) = r * std::sin(g1);
  };

  if (spec.mode == SphereMode::random) {
    for (Index k = 0; k < spec.n; ++k) {
      const double g1 = lat(rng);
      const double g2 = lon(rng);
      place(k, g1, g2, radius());
    }
  } else {
    const auto [a, b] = lattice_shape(spec.n);
    Index row = 0;
    for (Index i = 0; i < a; ++i) {
      const double g1 = -pi / 2.0 + (static_cast<double>(i) + 0.5) * pi / static_cast<double>(a);
      for (Index j = 0; j < b; ++j) {
        const double g2 = (static_cast<double>(j) + 0.5) * pi / static_cast<double>(b);
        place(row++, g1, g2, radius());
      }
    }
  }
  return PointCloud(std::move(pts));
}

PointCloud parse_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty file", 1);
  ++line_no;
  const auto header = split_commas(line);
  if (trim(line).empty()) throw ParseError("empty header", line_no);

  std::ptrdiff_t label_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "label") {
      if (label_col >= 0) throw ParseError("duplicate label column", line_no);
      label_col = static_cast<std::ptrdiff_t>(c);
    }
  }
  const std::size_t width = header.size();
  const std::size_t dims = width - (label_col >= 0 ? 1 : 0);
  if (dims == 0) throw ParseError("no coordinate columns", line_no);

  std::vector<double> values;
  std::vector<int> labels;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " cells, found " +
                           std::to_string(cells.size()),
                       line_no);
    }
    for (std::size_t c = 0; c < width; ++c) {
      if (static_cast<std::ptrdiff_t>(c) == label_col) {
        labels.push_back(parse_label(cells[c], line_no));
      } else {
        values.push_back(parse_double(cells[c], line_no));
      }
    }
    ++rows;
  }
  if (rows == 0) throw ParseError("no data rows", line_no + 1);

  RowMatrix pts = Eigen::Map<RowMatrix>(values.data(), static_cast<Index>(rows),
                                        static_cast<Index>(dims));
  std::optional<std::vector<int>> lab;
  if (label_col >= 0) lab = std::move(labels);
  return PointCloud(std::move(pts), std::move(lab));
}

PointCloud load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_csv(in);
}

void write_csv(const PointCloud& cloud, std::ostream& out, std::string_view prefix) {
  const auto& pts = cloud.points();
  for (Index c = 0; c < cloud.dim(); ++c) {
    if (c) out << ',';
    out << prefix << (c + 1);
  }
  if (cloud.has_labels()) out << ",label";
  out << '\n';
  char buf[40];
  for (Index r = 0; r < cloud.size(); ++r) {
    for (Index c = 0; c < cloud.dim(); ++c) {
      if (c) out << ',';
      std::snprintf(buf, sizeof buf, "%.17g", pts(r, c));
      out << buf;
    }
    if (cloud.has_labels()) out << ',' << (*cloud.labels())[static_cast<std::size_t>(r)];
    out << '\n';
  }
}

void save_csv(const PointCloud& cloud, const std::filesystem::path& path, std::string_view prefix) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_csv(cloud, out, prefix);
  if (!out) throw IoError("write failed for " + path.string());
}

PointCloud load_idx(const std::filesystem::path& images_path,
                    const std::filesystem::path& labels_path, const std::set<int>& keep_digits,
                    Index count, std::uint64_t seed) {
  if (count < 1) throw InvalidArgument("sample count must be >= 1 (empty sample)");

  const auto images = read_all(images_path);
  const auto labels = read_all(labels_path);

  if (read_be32(images, 0, images_path) != 0x00000803u) {
    throw ParseError("bad image magic number in " + images_path.string(), 0);
  }
  if (read_be32(labels, 0, labels_path) != 0x00000801u) {
    throw ParseError("bad label magic number in " + labels_path.string(), 0);
  }
  const std::size_t n_images = read_be32(images, 4, images_path);
  const std::size_t rows = read_be32(images, 8, images_path);
  const std::size_t cols = read_be32(images, 12, images_path);
  const std::size_t n_labels = read_be32(labels, 4, labels_path);
  const std::size_t pixels = rows * cols;
  if (pixels == 0) throw ParseError("zero-sized images in " + images_path.string(), 0);
  if (images.size() < 16 + n_images * pixels) {
    throw ParseError("truncated image file " + images_path.string(), 0);
  }
  if (labels.size() < 8 + n_labels) throw ParseError("truncated label file " + labels_path.string(), 0);
  if (n_labels != n_images) {
    throw ParseError("image count " + std::to_string(n_images) + " != label count " +
                         std::to_string(n_labels),
                     0);
  }

  std::vector<std::size_t> matching;
  for (std::size_t k = 0; k < n_images; ++k) {
    if (keep_digits.count(labels[8 + k])) matching.push_back(k);
  }
  if (static_cast<std::size_t>(count) > matching.size()) {
    throw InvalidArgument("requested " + std::to_string(count) + " images but only " +
                          std::to_string(matching.size()) + " match the digit filter");
  }

  // Partial Fisher-Yates: the first `count` slots become the sample.
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < static_cast<std::size_t>(count); ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, matching.size() - 1);
    std::swap(matching[k], matching[pick(rng)]);
  }
  matching.resize(static_cast<std::size_t>(count));
  std::sort(matching.begin(), matching.end());

  RowMatrix pts(count, static_cast<Index>(pixels));
  std::vector<int> out_labels;
  out_labels.reserve(matching.size());
  for (std::size_t r = 0; r < matching.size(); ++r) {
    const unsigned char* src = images.data() + 16 + matching[r] * pixels;
    for (std::size_t c = 0; c < pixels; ++c) {
      pts(static_cast<Index>(r), static_cast<Index>(c)) = static_cast<double>(src[c]) / 255.0;
    }
    out_labels.push_back(labels[8 + matching[r]]);
  }
  return PointCloud(std::move(pts), std::move(out_labels));
}

PointCloud add_gaussian_pixel_noise(const PointCloud& cloud, const NoiseSpec& noise) {
  if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma)) {
    throw InvalidArgument("noise sigma must be finite and >= 0");
  }
  if (noise.sigma == 0.0) return cloud;
  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, noise.sigma);
  RowMatrix pts = cloud.points();
  for (Index r = 0; r < pts.rows(); ++r) {
    for (Index c = 0; c < pts.cols(); ++c) pts(r, c) += gauss(rng);
  }
  return PointCloud(std::move(pts), cloud.labels());
}

}  // namespace sge

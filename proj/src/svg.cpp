#include "sge/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace sge::svg {
namespace {

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

class Canvas {
 public:
  Canvas() {
    out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
         << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << " " << num(kHeight)
         << "\" font-family=\"sans-serif\">\n"
         << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
         << "\" fill=\"white\"/>\n";
  }

  void text(double x, double y, const std::string& s, double size = 12, const char* anchor = "middle",
            double rotate = 0.0) {
    out_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << num(size)
         << "\" text-anchor=\"" << anchor << "\"";
    if (rotate != 0.0) out_ << " transform=\"rotate(" << num(rotate) << " " << num(x) << " " << num(y) << ")\"";
    out_ << ">" << escape(s) << "</text>\n";
  }
  void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1.0) {
    out_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\""
         << num(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\"" << num(width) << "\"/>\n";
  }
  void rect(double x, double y, double w, double h, const std::string& fill, const std::string& stroke = "none") {
    out_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w) << "\" height=\""
         << num(h) << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\"/>\n";
  }
  void circle(double x, double y, double r, const std::string& fill) {
    out_ << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"" << num(r) << "\" fill=\"" << fill
         << "\" fill-opacity=\"0.8\"/>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke) {
    out_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"2.00\" points=\"";
    for (std::size_t k = 0; k < pts.size(); ++k) out_ << (k ? " " : "") << num(pts[k].first) << "," << num(pts[k].second);
    out_ << "\"/>\n";
  }
  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  std::ostringstream out_;
};

struct Range {
  double lo = 0.0, hi = 1.0;

  void pad() {
    if (hi <= lo) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double m = 0.05 * (hi - lo);
    lo -= m;
    hi += m;
  }
};

const double kPlotLeft = kMarginLeft;
const double kPlotRight = kWidth - kMargin;
const double kPlotTop = kMargin;
const double kPlotBottom = kHeight - kMargin;

double map_x(double v, const Range& r) { return kPlotLeft + (v - r.lo) / (r.hi - r.lo) * (kPlotRight - kPlotLeft); }
double map_y(double v, const Range& r) { return kPlotBottom - (v - r.lo) / (r.hi - r.lo) * (kPlotBottom - kPlotTop); }

void axes(Canvas& c, const Range& xr, const Range& yr, const std::string& xl, const std::string& yl) {
  c.line(kPlotLeft, kPlotBottom, kPlotRight, kPlotBottom, "black");
  c.line(kPlotLeft, kPlotTop, kPlotLeft, kPlotBottom, "black");
  for (int k = 0; k <= 4; ++k) {
    const double fx = xr.lo + (xr.hi - xr.lo) * k / 4.0;
    const double fy = yr.lo + (yr.hi - yr.lo) * k / 4.0;
    c.line(map_x(fx, xr), kPlotBottom, map_x(fx, xr), kPlotBottom + 5, "black");
    c.text(map_x(fx, xr), kPlotBottom + 18, tick(fx), 10);
    c.line(kPlotLeft - 5, map_y(fy, yr), kPlotLeft, map_y(fy, yr), "black");
    c.text(kPlotLeft - 8, map_y(fy, yr) + 4, tick(fy), 10, "end");
  }
  c.text((kPlotLeft + kPlotRight) / 2, kHeight - 10, xl, 12);
  c.text(16, (kPlotTop + kPlotBottom) / 2, yl, 12, "middle", -90.0);
}

std::string diverging(double v, double scale) {
  if (std::isnan(v)) return "#cccccc";
  const double t = scale > 0.0 ? std::clamp(v / scale, -1.0, 1.0) : 0.0;
  // white -> green (26, 150, 65) for positive, white -> red (215, 25, 28) for negative
  const double r = t >= 0 ? 255 + t * (26 - 255) : 255 + (-t) * (215 - 255);
  const double g = t >= 0 ? 255 + t * (150 - 255) : 255 + (-t) * (25 - 255);
  const double b = t >= 0 ? 255 + t * (65 - 255) : 255 + (-t) * (28 - 255);
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(r)), static_cast<int>(std::lround(g)),
                static_cast<int>(std::lround(b)));
  return buf;
}

std::string label_of(const nlohmann::json& v) {
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return tick(v.get<double>());
  return v.dump();
}

}  // namespace

std::string scatter(const RowMatrix& xy, const std::optional<std::vector<int>>& labels, const std::string& title) {
  if (xy.rows() < 1 || xy.cols() < 1) throw InvalidArgument("scatter needs at least one point");
  const bool two_d = xy.cols() >= 2;
  Range xr{xy.col(0).minCoeff(), xy.col(0).maxCoeff()};
  Range yr = two_d ? Range{xy.col(1).minCoeff(), xy.col(1).maxCoeff()} : Range{0.0, 0.0};
  xr.pad();
  yr.pad();

  std::map<int, std::size_t> colour;
  if (labels) {
    for (int l : *labels) colour.emplace(l, 0);
    std::size_t k = 0;
    for (auto& [l, idx] : colour) idx = k++ % kPaletteSize;
  }

  Canvas c;
  c.text(kWidth / 2, 28, title, 16);
  axes(c, xr, yr, "e1", two_d ? "e2" : "");
  for (Index i = 0; i < xy.rows(); ++i) {
    const double y = two_d ? xy(i, 1) : 0.0;
    const std::string fill = labels ? kPalette[colour.at((*labels)[static_cast<std::size_t>(i)])] : kPalette[0];
    c.circle(map_x(xy(i, 0), xr), map_y(y, yr), 3.0, fill);
  }
  double ly = kPlotTop + 10;
  for (const auto& [l, idx] : colour) {
    c.rect(kPlotRight - 60, ly - 9, 10, 10, kPalette[idx]);
    c.text(kPlotRight - 45, ly, std::to_string(l), 11, "start");
    ly += 16;
  }
  return c.finish();
}

std::string heatmap(const Matrix& values, const std::vector<std::string>& row_labels,
                    const std::vector<std::string>& col_labels, const std::string& title,
                    const std::string& row_axis, const std::string& col_axis) {
  const Index rows = values.rows(), cols = values.cols();
  if (rows < 1 || cols < 1) throw InvalidArgument("heatmap needs at least one cell");
  if (static_cast<Index>(row_labels.size()) != rows || static_cast<Index>(col_labels.size()) != cols) {
    throw InvalidArgument("heatmap label counts do not match the value matrix");
  }
  double scale = 0.0;
  for (Index r = 0; r < rows; ++r) {
    for (Index k = 0; k < cols; ++k) {
      if (!std::isnan(values(r, k))) scale = std::max(scale, std::abs(values(r, k)));
    }
  }
  const double legend = 60.0;
  const double cw = (kPlotRight - legend - kPlotLeft) / static_cast<double>(cols);
  const double ch = (kPlotBottom - kPlotTop) / static_cast<double>(rows);

  Canvas c;
  c.text(kWidth / 2, 28, title, 16);
  for (Index r = 0; r < rows; ++r) {
    const double y = kPlotTop + static_cast<double>(r) * ch;
    c.text(kPlotLeft - 8, y + ch / 2 + 4, row_labels[static_cast<std::size_t>(r)], 10, "end");
    for (Index k = 0; k < cols; ++k) {
      const double x = kPlotLeft + static_cast<double>(k) * cw;
      c.rect(x, y, cw, ch, diverging(values(r, k), scale), "white");
      if (!std::isnan(values(r, k)) && cw >= 28 && ch >= 14) c.text(x + cw / 2, y + ch / 2 + 3, tick(values(r, k)), 8);
    }
  }
  for (Index k = 0; k < cols; ++k) {
    c.text(kPlotLeft + (static_cast<double>(k) + 0.5) * cw, kPlotBottom + 15, col_labels[static_cast<std::size_t>(k)], 10);
  }
  c.text((kPlotLeft + kPlotRight - legend) / 2, kHeight - 10, col_axis, 12);
  c.text(16, (kPlotTop + kPlotBottom) / 2, row_axis, 12, "middle", -90.0);

  const double lx = kPlotRight - legend + 20;
  const int steps = 10;
  const double sh = (kPlotBottom - kPlotTop) / steps;
  for (int s = 0; s < steps; ++s) {
    const double v = scale * (1.0 - 2.0 * (s + 0.5) / steps);
    c.rect(lx, kPlotTop + s * sh, 14, sh, diverging(v, scale));
  }
  c.text(lx + 7, kPlotTop - 6, tick(scale), 9);
  c.text(lx + 7, kPlotBottom + 12, tick(-scale), 9);
  return c.finish();
}

std::string line_chart(const std::vector<Series>& series, const std::string& x_label, const std::string& y_label,
                       const std::string& title) {
  Range xr{INFINITY, -INFINITY}, yr{INFINITY, -INFINITY};
  for (const auto& s : series) {
    if (s.x.size() != s.mean.size() || s.x.size() != s.stddev.size()) {
      throw InvalidArgument("series '" + s.name + "' has mismatched lengths");
    }
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      xr.lo = std::min(xr.lo, s.x[k]);
      xr.hi = std::max(xr.hi, s.x[k]);
      yr.lo = std::min(yr.lo, s.mean[k] - s.stddev[k]);
      yr.hi = std::max(yr.hi, s.mean[k] + s.stddev[k]);
    }
  }
  if (!std::isfinite(xr.lo)) throw InvalidArgument("line chart has no points");
  xr.pad();
  yr.pad();

  Canvas c;
  c.text(kWidth / 2, 28, title, 16);
  axes(c, xr, yr, x_label, y_label);
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const std::string colour = kPalette[si % kPaletteSize];
    std::vector<std::pair<double, double>> pts;
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      const double x = map_x(s.x[k], xr);
      pts.emplace_back(x, map_y(s.mean[k], yr));
      const double top = map_y(s.mean[k] + s.stddev[k], yr), bottom = map_y(s.mean[k] - s.stddev[k], yr);
      c.line(x, top, x, bottom, colour);
      c.line(x - 4, top, x + 4, top, colour);
      c.line(x - 4, bottom, x + 4, bottom, colour);
    }
    c.polyline(pts, colour);
    for (const auto& [x, y] : pts) c.circle(x, y, 3.0, colour);
    const double ly = kPlotTop + 10 + 16 * static_cast<double>(si);
    c.rect(kPlotLeft + 10, ly - 9, 10, 10, colour);
    c.text(kPlotLeft + 25, ly, s.name, 11, "start");
  }
  return c.finish();
}

std::string plot_report(const nlohmann::json& report) {
  if (!report.is_object() || !report.contains("cells") || !report.at("cells").is_array() ||
      report.at("cells").empty()) {
    throw InvalidArgument("report has no cells to plot");
  }
  const std::string study = report.value("study", std::string());
  const auto& cells = report.at("cells");

  if (study == "sphere_sweep") {
    std::set<long long> deltas;
    std::set<double> mus;
    const auto& surface = report.at("surface");
    for (const auto& e : surface) {
      deltas.insert(e.at("delta").get<long long>());
      mus.insert(e.at("mu_s").get<double>());
    }
    if (deltas.empty()) throw InvalidArgument("sphere sweep report has an empty E_I - E_S surface");
    Matrix values = Matrix::Constant(static_cast<Index>(deltas.size()), static_cast<Index>(mus.size()), NAN);
    const std::vector<long long> dv(deltas.begin(), deltas.end());
    const std::vector<double> mv(mus.begin(), mus.end());
    for (const auto& e : surface) {
      if (e.at("diff").is_null()) continue;
      const auto r = std::find(dv.begin(), dv.end(), e.at("delta").get<long long>()) - dv.begin();
      const auto k = std::find(mv.begin(), mv.end(), e.at("mu_s").get<double>()) - mv.begin();
      values(r, k) = e.at("diff").get<double>();
    }
    std::vector<std::string> rl, cl;
    for (auto d : dv) rl.push_back(std::to_string(d));
    for (auto m : mv) cl.push_back(tick(m));
    return heatmap(values, rl, cl, "E_I - E_S (green: SGE better)", "delta", "mu_s");
  }

  std::string axis = "index";
  for (const char* key : {"n", "eta", "sigma"}) {
    if (cells.front().at("params").contains(key)) axis = key;
  }
  std::map<std::string, Series> by_method;
  std::vector<std::string> order;
  for (const auto& cell : cells) {
    const auto& params = cell.at("params");
    if (cell.at("mean").is_null()) continue;
    std::string name = params.value("method", std::string("?")) + " d=" + label_of(params.at("delta"));
    if (params.contains("mu_s")) name += " mu=" + label_of(params.at("mu_s"));
    if (!by_method.count(name)) {
      order.push_back(name);
      by_method[name].name = name;
    }
    Series& s = by_method[name];
    s.x.push_back(params.contains(axis) ? params.at(axis).get<double>() : static_cast<double>(s.x.size()));
    s.mean.push_back(cell.at("mean").get<double>());
    s.stddev.push_back(cell.at("std").get<double>());
  }
  if (order.empty()) throw InvalidArgument("every cell in the report failed; nothing to plot");
  std::vector<Series> series;
  for (const auto& name : order) series.push_back(by_method[name]);
  return line_chart(series, axis, study == "image" ? "adjacency error" : "MAD", study + " study");
}

}  // namespace sge::svg

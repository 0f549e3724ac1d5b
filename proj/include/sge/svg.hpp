#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sge/point_cloud.hpp"

namespace sge::svg {

// Fixed layout: 640 x 480 canvas, 70 px left / 50 px other margins.
inline constexpr double kWidth = 640.0;
inline constexpr double kHeight = 480.0;
inline constexpr double kMarginLeft = 70.0;
inline constexpr double kMargin = 50.0;

/// First two columns of `xy`, one circle per row, coloured by label.
std::string scatter(const RowMatrix& xy, const std::optional<std::vector<int>>& labels,
                    const std::string& title);

/// values(r, c) drawn as cell (row r, column c); NaN cells are grey. Positive
/// values are green, negative red, symmetric around zero.
std::string heatmap(const Matrix& values, const std::vector<std::string>& row_labels,
                    const std::vector<std::string>& col_labels, const std::string& title,
                    const std::string& row_axis, const std::string& col_axis);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> stddev;
};

/// Mean lines with +-std error bars.
std::string line_chart(const std::vector<Series>& series, const std::string& x_label,
                       const std::string& y_label, const std::string& title);

/// Sphere sweeps become an E_I - E_S heatmap (rows delta, columns mu_s); other
/// studies become error-bar charts over their grid, one series per method.
/// Throws InvalidArgument for reports without cells.
std::string plot_report(const nlohmann::json& report);

}  // namespace sge::svg

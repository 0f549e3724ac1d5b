#pragma once

#include <span>
#include <vector>

#include "sge/point_cloud.hpp"

// Clamped B-spline basis on [0, 1] (Piegl & Tiller style, non-recursive).
namespace sge::bspline {

/// Clamped knot vector of the given degree with interior knots at the
/// m-2 interior sites of the uniform grid k / (m - 1).
std::vector<double> clamped_knots(int degree, Index m);

/// Number of basis functions for the knot vector.
inline Index basis_count(std::span<const double> knots, int degree) {
  return static_cast<Index>(knots.size()) - degree - 1;
}

/// Knot span index s with knots[s] <= z < knots[s+1]; z == 1 maps to the last
/// non-empty span.
Index find_span(std::span<const double> knots, int degree, double z);

/// Row r of the result holds the r-th derivative (r = 0..order) of the
/// degree+1 basis functions that are nonzero on `span`, i.e. B_{span-degree+c}.
Matrix basis_derivatives(std::span<const double> knots, int degree, Index span, double z, int order);

/// Spline value sum_i coefs[i] B_i(z).
double evaluate(std::span<const double> knots, int degree, const Vector& coefs, double z);

/// Uniform grid k / (count - 1), k = 0..count-1.
std::vector<double> uniform_grid(Index count);

}  // namespace sge::bspline

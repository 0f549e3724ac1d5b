#pragma once

#include <span>
#include <vector>

#include "sge/point_cloud.hpp"

namespace sge {

/// One-dimensional smoothing spline on [0, 1] over the uniform site grid
/// z_k = k / (m - 1), clamped knots with every interior site as a knot.
struct Spline1D {
  int degree = 3;
  std::vector<double> knots;
  Vector coefficients;
  /// Residual sum of squares at the sites.
  double achieved_rss = 0.0;
  /// Penalty weight that realised the budget: 0 for interpolation, +inf for the
  /// straight-line least-squares limit.
  double lambda = 0.0;

  double evaluate(double z) const;
};

/// d channel splines sharing degree and knots.
struct SplineD {
  int degree = 3;
  std::vector<Spline1D> channels;

  Index dim() const noexcept { return static_cast<Index>(channels.size()); }
  Vector evaluate(double z) const;
};

struct CascadeResult {
  double length = 0.0;
  /// 3, 2 or 1 for the accepted spline, 0 when the geodesic itself was kept.
  int degree_used = 0;
  double geodesic_length = 0.0;
};

/// Residual-budget smoothing spline: among splines of `degree` with knots at
/// the sites, minimise the roughness penalty subject to RSS <= s.
///
/// Roughness is the integral of f''^2 for degrees 2 and 3, and the sum of
/// squared slope jumps (scaled by the mean adjacent spacing) for degree 1, so
/// straight lines are penalty-free at every degree. s == 0 interpolates; when
/// the least-squares line already meets the budget it is returned. Otherwise
/// the penalty weight is searched on log(lambda) in [-18, 18].
///
/// Throws InsufficientPoints when ys.size() <= degree, InvalidArgument for
/// non-finite input or negative s, NumericalError when the search fails.
Spline1D fit_1d(std::span<const double> ys, int degree, double s);

/// Fits every column of `points` (m x d) with budget s = mu_s * m.
SplineD fit_dd(const RowMatrix& points, int degree, double mu_s);

/// Chordal length over the uniform grid of h parameter values.
double spline_length(const SplineD& f, Index h);

/// Sum of consecutive Euclidean distances between rows.
double geodesic_length(const RowMatrix& points);

/// Acceptance bound d_G (100 + nu) / 100, written so that nu == 0 gives d_G exactly.
inline double length_cap(double geodesic, double nu) { return geodesic + geodesic * (nu / 100.0); }

/// Degree cascade: tries 3, 2, 1 (as m allows) and accepts the first spline
/// whose length is below d_G (100 + nu) / 100; otherwise returns d_G with
/// degree_used = 0. Numerical failure of a fit counts as rejection.
CascadeResult smooth_geodesic_length(const RowMatrix& points, double mu_s, double nu, Index h);

}  // namespace sge

#include "sge/spline.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <tuple>

#include "sge/bspline.hpp"

namespace sge {
namespace {

constexpr double kLogLambdaMin = -18.0;
constexpr double kLogLambdaMax = 18.0;
constexpr int kMaxSearchIterations = 200;
constexpr double kBracketWidth = 1e-12;

// Linear operators for one (degree, m): everything a fit needs except data.
//
// For fitted site values g, the coefficient vector of least roughness that
// reproduces g is T g, and that roughness is g' K g. The penalised fit with
// weight lambda is then g = (I + lambda K)^-1 y, diagonal in K's eigenbasis.
struct SiteOperator {
  int degree = 0;
  Index m = 0;
  std::vector<double> knots;
  Matrix coef_from_values;  // T, N x m
  Matrix eigvecs;           // U, m x m, columns ascending in kappa
  Vector kappa;             // eigenvalues of K; the first `null_dim` are exactly zero
  Index null_dim = 0;
};

// Grid evaluation for one (degree, m, h): row r of `grid_diff` maps fitted site
// values to f(z_{r+1}) - f(z_r) on the uniform h-point grid.
struct GridOperator {
  Matrix grid_diff;  // (h - 1) x m
};

Matrix roughness_matrix(int degree, std::span<const double> knots) {
  const Index nb = bspline::basis_count(knots, degree);
  Matrix omega = Matrix::Zero(nb, nb);
  if (degree == 1) {
    // Piecewise linear with knots at the sites: coefficients are site values.
    // Penalise slope jumps at interior sites, scaled like a second difference.
    for (Index k = 1; k + 1 < nb; ++k) {
      const double left = knots[static_cast<std::size_t>(k + 1)] - knots[static_cast<std::size_t>(k)];
      const double right = knots[static_cast<std::size_t>(k + 2)] - knots[static_cast<std::size_t>(k + 1)];
      Vector jump = Vector::Zero(nb);
      jump(k - 1) = 1.0 / left;
      jump(k) = -1.0 / left - 1.0 / right;
      jump(k + 1) = 1.0 / right;
      omega += (2.0 / (left + right)) * jump * jump.transpose();
    }
    return omega;
  }
  // Integral of f''^2, exact via 3-point Gauss-Legendre on every knot interval.
  static constexpr std::array<double, 3> nodes{-0.7745966692414834, 0.0, 0.7745966692414834};
  static constexpr std::array<double, 3> weights{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  for (Index span = degree; span < nb; ++span) {
    const double a = knots[static_cast<std::size_t>(span)];
    const double b = knots[static_cast<std::size_t>(span + 1)];
    if (!(b > a)) continue;
    const double half = 0.5 * (b - a);
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      const double z = 0.5 * (a + b) + half * nodes[q];
      const Matrix ders = bspline::basis_derivatives(knots, degree, span, z, 2);
      const double w = weights[q] * half;
      for (int r = 0; r <= degree; ++r) {
        for (int c = 0; c <= degree; ++c) {
          omega(span - degree + r, span - degree + c) += w * ders(2, r) * ders(2, c);
        }
      }
    }
  }
  return omega;
}

Matrix collocation(int degree, std::span<const double> knots, const std::vector<double>& at) {
  const Index nb = bspline::basis_count(knots, degree);
  Matrix out = Matrix::Zero(static_cast<Index>(at.size()), nb);
  for (std::size_t r = 0; r < at.size(); ++r) {
    const Index span = bspline::find_span(knots, degree, at[r]);
    const Matrix ders = bspline::basis_derivatives(knots, degree, span, at[r], 0);
    for (int c = 0; c <= degree; ++c) out(static_cast<Index>(r), span - degree + c) = ders(0, c);
  }
  return out;
}

SiteOperator build_site_operator(int degree, Index m) {
  SiteOperator op;
  op.degree = degree;
  op.m = m;
  op.knots = bspline::clamped_knots(degree, m);
  const Index nb = bspline::basis_count(op.knots, degree);
  const Matrix basis = collocation(degree, op.knots, bspline::uniform_grid(m));  // m x nb
  const Matrix omega = roughness_matrix(degree, op.knots);

  // basis' = Q R; columns of Q beyond m span the null space of `basis`.
  Eigen::HouseholderQR<Matrix> qr(basis.transpose());
  const Matrix q = qr.householderQ() * Matrix::Identity(nb, nb);
  const Matrix r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  const Matrix r_inv_t =
      r.transpose().triangularView<Eigen::Lower>().solve(Matrix::Identity(m, m));
  Matrix t = q.leftCols(m) * r_inv_t;  // particular solution: basis * t == I
  if (nb > m) {
    const Matrix z = q.rightCols(nb - m);
    const Matrix zoz = z.transpose() * omega * z;
    Eigen::LLT<Matrix> llt(zoz);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("roughness is singular on the interpolation null space (degree " +
                           std::to_string(degree) + ", m " + std::to_string(m) + ")");
    }
    t -= z * llt.solve(z.transpose() * omega * t);
  }
  op.coef_from_values = t;

  Matrix k = t.transpose() * omega * t;
  k = 0.5 * (k + k.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(k);
  if (eig.info() != Eigen::Success) throw NumericalError("eigen-decomposition of roughness failed");
  op.eigvecs = eig.eigenvectors();
  op.kappa = eig.eigenvalues();
  // Straight lines are penalty-free at every degree: a 2-dimensional null space.
  op.null_dim = std::min<Index>(2, m);
  for (Index j = 0; j < op.null_dim; ++j) op.kappa(j) = 0.0;
  for (Index j = op.null_dim; j < m; ++j) op.kappa(j) = std::max(op.kappa(j), 0.0);
  return op;
}

GridOperator build_grid_operator(const SiteOperator& op, Index h) {
  const Matrix eval = collocation(op.degree, op.knots, bspline::uniform_grid(h)) * op.coef_from_values;
  GridOperator g;
  g.grid_diff = eval.bottomRows(h - 1) - eval.topRows(h - 1);
  return g;
}

class OperatorCache {
 public:
  std::shared_ptr<const SiteOperator> site(int degree, Index m) {
    const auto key = std::make_pair(degree, m);
    {
      std::shared_lock lock(mutex_);
      if (auto it = sites_.find(key); it != sites_.end()) return it->second;
    }
    auto built = std::make_shared<const SiteOperator>(build_site_operator(degree, m));
    std::unique_lock lock(mutex_);
    return sites_.try_emplace(key, std::move(built)).first->second;
  }

  std::shared_ptr<const GridOperator> grid(int degree, Index m, Index h) {
    const auto key = std::make_tuple(degree, m, h);
    {
      std::shared_lock lock(mutex_);
      if (auto it = grids_.find(key); it != grids_.end()) return it->second;
    }
    auto op = site(degree, m);
    auto built = std::make_shared<const GridOperator>(build_grid_operator(*op, h));
    std::unique_lock lock(mutex_);
    return grids_.try_emplace(key, std::move(built)).first->second;
  }

 private:
  std::shared_mutex mutex_;
  std::map<std::pair<int, Index>, std::shared_ptr<const SiteOperator>> sites_;
  std::map<std::tuple<int, Index, Index>, std::shared_ptr<const GridOperator>> grids_;
};

OperatorCache& cache() {
  static OperatorCache instance;
  return instance;
}

struct BudgetTerms {
  double rss;
  double slope;  // d rss / d log(lambda)
};

BudgetTerms budget_terms(const SiteOperator& op, const double* spectral, double log_lambda) {
  const double lambda = std::exp(log_lambda);
  double rss = 0.0, slope = 0.0;
  for (Index j = op.null_dim; j < op.m; ++j) {
    const double lk = lambda * op.kappa(j);
    const double shrink = lk / (1.0 + lk);
    const double y2 = spectral[j] * spectral[j];
    rss += shrink * shrink * y2;
    slope += 2.0 * shrink * shrink * (1.0 - shrink) * y2;
  }
  return {rss, slope};
}

// Fills phi (site-value filter in the eigenbasis) for one channel and returns
// the penalty weight. `spectral` is U' y.
double solve_budget(const SiteOperator& op, const double* spectral, double s, double* phi) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  double rss_limit = 0.0;
  for (Index j = op.null_dim; j < op.m; ++j) rss_limit += spectral[j] * spectral[j];
  for (Index j = 0; j < op.null_dim; ++j) phi[j] = 1.0;

  if (rss_limit <= s) {
    for (Index j = op.null_dim; j < op.m; ++j) phi[j] = 0.0;
    return inf;
  }

  const double tol = 1e-8 * std::max(1.0, s);
  double lo = kLogLambdaMin, hi = kLogLambdaMax;
  double t;
  const BudgetTerms at_lo = budget_terms(op, spectral, lo);
  const BudgetTerms at_hi = budget_terms(op, spectral, hi);
  if (at_lo.rss - s > tol) {
    throw NumericalError("residual budget " + std::to_string(s) +
                         " is below the reachable range of the penalty search");
  }
  if (std::abs(at_lo.rss - s) <= tol) {
    t = lo;
  } else if (at_hi.rss <= s) {
    t = hi;
  } else {
    // Safeguarded Newton on the monotone map log(lambda) -> RSS; falls back to
    // bisection whenever the step leaves the bracket or stalls.
    t = 0.5 * (lo + hi);
    double step_old = hi - lo, step = step_old;
    BudgetTerms cur = budget_terms(op, spectral, t);
    for (int iter = 0; iter < kMaxSearchIterations; ++iter) {
      const double f = cur.rss - s;
      if (std::abs(f) <= tol) break;
      if (f < 0.0) lo = t; else hi = t;
      if (hi - lo < kBracketWidth) {
        t = lo;
        break;
      }
      const double df = cur.slope;
      const bool newton_ok = df > 0.0 && ((t - hi) * df - f) * ((t - lo) * df - f) < 0.0 &&
                             std::abs(2.0 * f) <= std::abs(step_old * df);
      step_old = step;
      if (newton_ok) {
        step = f / df;
        t -= step;
      } else {
        step = 0.5 * (hi - lo);
        t = lo + step;
      }
      cur = budget_terms(op, spectral, t);
    }
    if (cur.rss - s > tol) t = lo;
  }

  const double lambda = std::exp(t);
  for (Index j = op.null_dim; j < op.m; ++j) phi[j] = 1.0 / (1.0 + lambda * op.kappa(j));
  return lambda;
}

void check_degree(int degree) {
  if (degree < 1 || degree > 3) throw InvalidArgument("spline degree must be 1, 2 or 3");
}

// Fitted site values for every column of `points` under budget s.
Matrix fitted_values(const SiteOperator& op, const RowMatrix& points, double s) {
  if (s == 0.0) return points;
  const Matrix spectral = op.eigvecs.transpose() * points;
  Matrix filtered(op.m, points.cols());
  for (Index c = 0; c < points.cols(); ++c) {
    solve_budget(op, spectral.col(c).data(), s, filtered.col(c).data());
  }
  Matrix out = op.eigvecs * filtered.cwiseProduct(spectral);
  if (!out.allFinite()) throw NumericalError("non-finite fitted values");
  return out;
}

double cascade_stage_length(const RowMatrix& points, int degree, double s, Index h) {
  const Index m = points.rows();
  const auto op = cache().site(degree, m);
  const auto grid = cache().grid(degree, m, h);
  const Matrix values = fitted_values(*op, points, s);
  const Matrix& diff = grid->grid_diff;
  double length = 0.0;
  if (points.cols() <= m) {
    const Matrix steps = diff * values;  // (h-1) x d
    for (Index r = 0; r < steps.rows(); ++r) length += steps.row(r).norm();
  } else {
    // High-dimensional channels: work with the m x m Gram of fitted values.
    const Matrix gram = values * values.transpose();
    const Matrix proj = diff * gram;
    for (Index r = 0; r < diff.rows(); ++r) {
      length += std::sqrt(std::max(0.0, proj.row(r).dot(diff.row(r))));
    }
  }
  if (!std::isfinite(length)) throw NumericalError("non-finite spline length");
  return length;
}

}  // namespace

double Spline1D::evaluate(double z) const {
  return bspline::evaluate(knots, degree, coefficients, z);
}

Vector SplineD::evaluate(double z) const {
  Vector out(dim());
  for (Index c = 0; c < dim(); ++c) out(c) = channels[static_cast<std::size_t>(c)].evaluate(z);
  return out;
}

Spline1D fit_1d(std::span<const double> ys, int degree, double s) {
  check_degree(degree);
  const Index m = static_cast<Index>(ys.size());
  if (m <= degree) {
    throw InsufficientPoints("degree " + std::to_string(degree) + " spline needs more than " +
                             std::to_string(degree) + " points; got " + std::to_string(m));
  }
  if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidArgument("residual budget must be finite and >= 0");
  const Eigen::Map<const Vector> y(ys.data(), m);
  if (!y.allFinite()) throw InvalidArgument("fit_1d input contains non-finite values");

  const auto op = cache().site(degree, m);
  Spline1D spline;
  spline.degree = degree;
  spline.knots = op->knots;

  Vector values;
  if (s == 0.0) {
    values = y;
    spline.lambda = 0.0;
  } else {
    const Vector spectral = op->eigvecs.transpose() * y;
    Vector phi(m);
    spline.lambda = solve_budget(*op, spectral.data(), s, phi.data());
    values = op->eigvecs * phi.cwiseProduct(spectral);
  }
  spline.coefficients = op->coef_from_values * values;
  if (!spline.coefficients.allFinite()) throw NumericalError("non-finite spline coefficients");
  spline.achieved_rss = (y - values).squaredNorm();
  return spline;
}

SplineD fit_dd(const RowMatrix& points, int degree, double mu_s) {
  if (!(mu_s >= 0.0) || !std::isfinite(mu_s)) throw InvalidArgument("mu_s must be finite and >= 0");
  const double s = mu_s * static_cast<double>(points.rows());
  SplineD out;
  out.degree = degree;
  out.channels.reserve(static_cast<std::size_t>(points.cols()));
  for (Index c = 0; c < points.cols(); ++c) {
    const Vector column = points.col(c);
    out.channels.push_back(fit_1d({column.data(), static_cast<std::size_t>(column.size())}, degree, s));
  }
  return out;
}

double spline_length(const SplineD& f, Index h) {
  if (h < 2) throw InvalidArgument("spline_length needs h >= 2");
  const auto grid = bspline::uniform_grid(h);
  double length = 0.0;
  Vector prev = f.evaluate(grid[0]);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    Vector cur = f.evaluate(grid[k]);
    length += (cur - prev).norm();
    prev = std::move(cur);
  }
  return length;
}

double geodesic_length(const RowMatrix& points) {
  if (points.rows() < 2) throw InvalidArgument("geodesic_length needs at least two points");
  double length = 0.0;
  for (Index k = 0; k + 1 < points.rows(); ++k) length += distance(points, k, points, k + 1);
  return length;
}

CascadeResult smooth_geodesic_length(const RowMatrix& points, double mu_s, double nu, Index h) {
  const Index m = points.rows();
  if (m < 2) throw InvalidArgument("smooth_geodesic_length needs m >= 2");
  if (h < 2) throw InvalidArgument("h must be >= 2");
  if (!(mu_s >= 0.0) || !(nu >= 0.0)) throw InvalidArgument("mu_s and nu must be >= 0");

  CascadeResult result;
  result.geodesic_length = geodesic_length(points);
  result.length = result.geodesic_length;
  const double cap = length_cap(result.geodesic_length, nu);
  const double s = mu_s * static_cast<double>(m);

  const int top = m >= 4 ? 3 : (m == 3 ? 2 : 1);
  for (int degree = top; degree >= 1; --degree) {
    try {
      const double len = cascade_stage_length(points, degree, s, h);
      if (len < cap) {
        result.length = len;
        result.degree_used = degree;
        return result;
      }
    } catch (const NumericalError&) {
      // Rejected; try the next lower degree.
    }
  }
  return result;
}

}  // namespace sge

#include "sge/bspline.hpp"

#include <algorithm>

namespace sge::bspline {

std::vector<double> uniform_grid(Index count) {
  std::vector<double> z(static_cast<std::size_t>(count));
  if (count == 1) {
    z[0] = 0.0;
    return z;
  }
  const double denom = static_cast<double>(count - 1);
  for (Index k = 0; k < count; ++k) z[static_cast<std::size_t>(k)] = static_cast<double>(k) / denom;
  z.back() = 1.0;
  return z;
}

std::vector<double> clamped_knots(int degree, Index m) {
  if (degree < 1 || m < 2) throw InvalidArgument("clamped_knots needs degree >= 1 and m >= 2");
  const auto sites = uniform_grid(m);
  std::vector<double> knots;
  knots.reserve(static_cast<std::size_t>(2 * (degree + 1) + m - 2));
  knots.insert(knots.end(), static_cast<std::size_t>(degree + 1), 0.0);
  knots.insert(knots.end(), sites.begin() + 1, sites.end() - 1);
  knots.insert(knots.end(), static_cast<std::size_t>(degree + 1), 1.0);
  return knots;
}

Index find_span(std::span<const double> knots, int degree, double z) {
  const Index n = basis_count(knots, degree);
  if (z >= knots[static_cast<std::size_t>(n)]) return n - 1;
  if (z <= knots[static_cast<std::size_t>(degree)]) return degree;
  // First knot strictly greater than z, minus one.
  const auto it = std::upper_bound(knots.begin() + degree, knots.begin() + n + 1, z);
  return static_cast<Index>(it - knots.begin()) - 1;
}

Matrix basis_derivatives(std::span<const double> knots, int degree, Index span, double z, int order) {
  const int p = degree;
  const auto u = [&](Index k) { return knots[static_cast<std::size_t>(k)]; };

  // ndu: upper triangle holds basis values, lower triangle knot differences.
  Matrix ndu(p + 1, p + 1);
  std::vector<double> left(static_cast<std::size_t>(p + 1)), right(static_cast<std::size_t>(p + 1));
  ndu(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[static_cast<std::size_t>(j)] = z - u(span + 1 - j);
    right[static_cast<std::size_t>(j)] = u(span + j) - z;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu(j, r) = right[static_cast<std::size_t>(r + 1)] + left[static_cast<std::size_t>(j - r)];
      const double temp = ndu(r, j - 1) / ndu(j, r);
      ndu(r, j) = saved + right[static_cast<std::size_t>(r + 1)] * temp;
      saved = left[static_cast<std::size_t>(j - r)] * temp;
    }
    ndu(j, j) = saved;
  }

  Matrix ders = Matrix::Zero(order + 1, p + 1);
  for (int j = 0; j <= p; ++j) ders(0, j) = ndu(j, p);

  Matrix a(2, p + 1);
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a(0, 0) = 1.0;
    for (int k = 1; k <= std::min(order, p); ++k) {
      double d = 0.0;
      const int rk = r - k, pk = p - k;
      if (r >= k) {
        a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
        d = a(s2, 0) * ndu(rk, pk);
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
        d += a(s2, j) * ndu(rk + j, pk);
      }
      if (r <= pk) {
        a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
        d += a(s2, k) * ndu(r, pk);
      }
      ders(k, r) = d;
      std::swap(s1, s2);
    }
  }
  double factor = p;
  for (int k = 1; k <= std::min(order, p); ++k) {
    ders.row(k) *= factor;
    factor *= (p - k);
  }
  return ders;
}

double evaluate(std::span<const double> knots, int degree, const Vector& coefs, double z) {
  const Index span = find_span(knots, degree, z);
  // de Boor's recursion on the degree+1 active coefficients.
  std::vector<double> d(static_cast<std::size_t>(degree + 1));
  for (int j = 0; j <= degree; ++j) d[static_cast<std::size_t>(j)] = coefs(span - degree + j);
  for (int r = 1; r <= degree; ++r) {
    for (int j = degree; j >= r; --j) {
      const Index i = span - degree + j;
      const double lo = knots[static_cast<std::size_t>(i)];
      const double hi = knots[static_cast<std::size_t>(i + degree + 1 - r)];
      const double alpha = (z - lo) / (hi - lo);
      d[static_cast<std::size_t>(j)] =
          (1.0 - alpha) * d[static_cast<std::size_t>(j - 1)] + alpha * d[static_cast<std::size_t>(j)];
    }
  }
  return d[static_cast<std::size_t>(degree)];
}

}  // namespace sge::bspline

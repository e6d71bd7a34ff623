#pragma once

// Reference computations written independently of the library code paths.

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// First positive root of 2 mu cos mu - (mu^2 - 1) sin mu, computed to 20
// digits with mpmath (findroot on the cot form, then checked against g).
inline constexpr long double mu1 = 1.3065423741888062022L;

// Plain composite trapezoid of f on [0, 1] with m points.
inline double trapezoid(const std::function<double(double)>& f, std::size_t m) {
  const double h = 1.0 / static_cast<double>(m - 1);
  double s = 0.5 * (f(0.0) + f(1.0));
  for (std::size_t a = 1; a + 1 < m; ++a) s += f(static_cast<double>(a) * h);
  return s * h;
}

// Integral of exp(-|t - s|) over s in [0, 1].
inline double t_of_one(double t) { return 2.0 - std::exp(-t) - std::exp(-(1.0 - t)); }

// (G kron D + lambda I) assembled entry by entry.
inline Eigen::MatrixXd kron_system(const Eigen::MatrixXd& g, const Eigen::MatrixXd& d, double lambda) {
  const Eigen::Index n = g.rows(), m = d.rows();
  Eigen::MatrixXd a(n * m, n * m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index p = 0; p < m; ++p)
        for (Eigen::Index q = 0; q < m; ++q) a(i * m + p, j * m + q) = g(i, j) * d(p, q);
  a.diagonal().array() += lambda;
  return a;
}

// Trapezoid matrix of exp(-|t - s|) on m uniform points.
inline Eigen::MatrixXd exp_quadrature(std::size_t m) {
  const double h = 1.0 / static_cast<double>(m - 1);
  Eigen::MatrixXd d(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      const double w = (b == 0 || b + 1 == m) ? 0.5 * h : h;
      d(a, b) = std::exp(-std::abs(static_cast<double>(a) - static_cast<double>(b)) * h) * w;
    }
  return d;
}

}  // namespace oracle

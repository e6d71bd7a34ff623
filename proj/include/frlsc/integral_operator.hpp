#pragma once

// The output-space operator (T y)(t) = int_0^1 exp(-|t - s|) y(s) ds.
//
// Its eigenpairs are known in closed form: for each positive root mu of
// cot(mu) = (mu - 1/mu) / 2 the eigenvalue is 2 / (1 + mu^2) and the
// eigenfunction is mu cos(mu t) + sin(mu t). Roots are located by bisection
// on g(mu) = 2 mu cos(mu) - (mu^2 - 1) sin(mu), which shares the roots of the
// cot equation but has no poles; the i-th root lies in ((i-1) pi, i pi).
//
// Roots are carried in long double. At mu ~ 60 a correctly rounded double
// already leaves |g| ~ 1e-11 because g' grows like mu^2.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frlsc/errors.hpp"
#include "frlsc/function_space.hpp"

namespace frlsc {

enum class OperatorKind { exponential, identity };

inline std::string to_string(OperatorKind k) {
  return k == OperatorKind::exponential ? "exponential" : "identity";
}

inline OperatorKind operator_kind_from_string(const std::string& s) {
  if (s == "exponential") return OperatorKind::exponential;
  if (s == "identity") return OperatorKind::identity;
  throw ArgumentError("integral-operator", "unknown operator kind '" + s + "'");
}

/// g(mu) = 2 mu cos(mu) - (mu^2 - 1) sin(mu).
template <typename Real>
Real mu_equation(Real mu) {
  using std::cos;
  using std::sin;
  return Real(2) * mu * cos(mu) - (mu * mu - Real(1)) * sin(mu);
}

/// |cot(mu) - (mu - 1/mu)/2|, the residual of the original equation.
template <typename Real>
Real mu_cot_residual(Real mu) {
  using std::abs;
  using std::cos;
  using std::sin;
  return abs(cos(mu) / sin(mu) - (mu - Real(1) / mu) / Real(2));
}

/// Bisection on a sign-changing bracket. Stops when the bracket cannot be
/// split further in `Real`, on an exact zero, or after `max_iterations`.
template <typename Real, typename F>
Real bisect(F&& f, Real lo, Real hi, int max_iterations = 200) {
  Real f_lo = f(lo);
  const Real f_hi = f(hi);
  if (!((f_lo < 0 && f_hi > 0) || (f_lo > 0 && f_hi < 0))) {
    std::ostringstream os;
    os.precision(17);
    os << "no sign change on [" << static_cast<double>(lo) << ", " << static_cast<double>(hi)
       << "]: f(lo)=" << static_cast<double>(f_lo) << ", f(hi)=" << static_cast<double>(f_hi);
    throw NumericError("integral-operator", os.str());
  }
  for (int it = 0; it < max_iterations; ++it) {
    const Real mid = lo + (hi - lo) / Real(2);
    if (mid == lo || mid == hi) break;
    const Real f_mid = f(mid);
    if (f_mid == 0) return mid;
    if ((f_mid < 0) == (f_lo < 0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  // Endpoint with the smaller residual.
  using std::abs;
  return abs(f(lo)) <= abs(f(hi)) ? lo : hi;
}

/// The k smallest positive roots of cot(mu) = (mu - 1/mu)/2, ascending.
inline std::vector<long double> find_mu_roots(std::size_t k) {
  if (k == 0) throw ArgumentError("integral-operator", "need at least one root (k >= 1)");
  constexpr long double pi = std::numbers::pi_v<long double>;
  std::vector<long double> roots;
  roots.reserve(k);
  for (std::size_t i = 1; i <= k; ++i) {
    // g(0) = 0 is not a root of the cot equation; start the first bracket
    // just inside the interval, where g > 0.
    const long double lo = i == 1 ? 1e-3L : static_cast<long double>(i - 1) * pi;
    const long double hi = static_cast<long double>(i) * pi;
    roots.push_back(bisect([](long double mu) { return mu_equation(mu); }, lo, hi));
  }
  return roots;
}

inline double eigenvalue_from_root(long double mu) {
  return static_cast<double>(2.0L / (1.0L + mu * mu));
}

/// mu cos(mu t) + sin(mu t) sampled on `grid`, scaled to unit L2 norm on that grid.
inline SampledFunction eigenfunction_from_root(long double mu, Grid grid) {
  auto w = SampledFunction::from(grid, [mu](double t) {
    const long double x = mu * static_cast<long double>(t);
    return static_cast<double>(mu * std::cos(x) + std::sin(x));
  });
  w *= 1.0 / l2_norm(w);
  return w;
}

/// Truncated eigensystem of the output operator on a grid.
struct OperatorEigen {
  OperatorKind kind = OperatorKind::exponential;
  Grid grid{2};
  std::vector<long double> mu;     // roots, ascending (empty for identity)
  std::vector<double> delta;       // eigenvalues, descending
  std::vector<SampledFunction> w;  // eigenfunctions, unit L2 norm
  double next_delta = 0.0;         // largest discarded eigenvalue

  std::size_t k() const noexcept { return delta.size(); }
};

/// Eigensystem built from an explicit root table (used when reloading models).
inline OperatorEigen operator_eigensystem_from_roots(std::vector<long double> mu, Grid grid,
                                                     double next_delta) {
  if (mu.empty()) throw ArgumentError("integral-operator", "empty root table");
  OperatorEigen e;
  e.kind = OperatorKind::exponential;
  e.grid = grid;
  e.delta.reserve(mu.size());
  e.w.reserve(mu.size());
  for (long double r : mu) {
    e.delta.push_back(eigenvalue_from_root(r));
    e.w.push_back(eigenfunction_from_root(r, grid));
  }
  e.mu = std::move(mu);
  e.next_delta = next_delta;
  return e;
}

inline OperatorEigen operator_eigensystem(std::size_t k, Grid grid) {
  auto roots = find_mu_roots(k + 1);
  const double next = eigenvalue_from_root(roots.back());
  roots.pop_back();
  return operator_eigensystem_from_roots(std::move(roots), grid, next);
}

/// Identity operator with the full grid basis e_a / sqrt(weight_a), all eigenvalues 1.
inline OperatorEigen identity_eigensystem(Grid grid) {
  OperatorEigen e;
  e.kind = OperatorKind::identity;
  e.grid = grid;
  for (std::size_t a = 0; a < grid.size(); ++a) {
    SampledFunction basis(grid);
    basis[a] = 1.0 / std::sqrt(grid.weight(a));
    e.w.push_back(std::move(basis));
    e.delta.push_back(1.0);
  }
  e.next_delta = 0.0;
  return e;
}

namespace detail {

/// exp(-d h) for every grid offset d; the kernel only depends on |a - b|.
inline std::vector<double> exponential_offsets(const Grid& grid) {
  std::vector<double> table(grid.size());
  const double h = grid.spacing();
  for (std::size_t d = 0; d < table.size(); ++d) table[d] = std::exp(-static_cast<double>(d) * h);
  return table;
}

}  // namespace detail

/// Trapezoid quadrature of (T y)(t_a) at every grid point.
inline SampledFunction apply_T_quadrature(const SampledFunction& y) {
  const Grid& grid = y.grid();
  const std::size_t m = grid.size();
  const auto kernel = detail::exponential_offsets(grid);
  std::vector<double> wy(m);
  for (std::size_t b = 0; b < m; ++b) wy[b] = grid.weight(b) * y[b];
  SampledFunction out(grid);
  for (std::size_t a = 0; a < m; ++a) {
    double s = 0.0;
    for (std::size_t b = 0; b < m; ++b) s += kernel[a > b ? a - b : b - a] * wy[b];
    out[a] = s;
  }
  return out;
}

/// D with D(a,b) = exp(-|t_a - t_b|) * weight(b); D * y equals apply_T_quadrature(y).
inline Eigen::MatrixXd dense_T_matrix(const Grid& grid) {
  const auto m = static_cast<Eigen::Index>(grid.size());
  const auto kernel = detail::exponential_offsets(grid);
  Eigen::MatrixXd d(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      d(a, b) = kernel[static_cast<std::size_t>(a > b ? a - b : b - a)] *
                grid.weight(static_cast<std::size_t>(b));
    }
  }
  return d;
}

inline SampledFunction apply_operator(OperatorKind kind, const SampledFunction& y) {
  return kind == OperatorKind::exponential ? apply_T_quadrature(y) : y;
}

inline Eigen::MatrixXd dense_operator_matrix(OperatorKind kind, const Grid& grid) {
  if (kind == OperatorKind::exponential) return dense_T_matrix(grid);
  const auto m = static_cast<Eigen::Index>(grid.size());
  return Eigen::MatrixXd::Identity(m, m);
}

}  // namespace frlsc

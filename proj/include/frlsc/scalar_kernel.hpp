#pragma once

// Scalar kernel G over functional inputs, its Gram matrix, and a dense
// symmetric eigensolver (cyclic Jacobi) for that matrix.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frlsc/errors.hpp"
#include "frlsc/function_space.hpp"
#include "frlsc/parallel.hpp"

namespace frlsc {

enum class ScalarKernelKind { gaussian, laplacian_l2 };

inline std::string to_string(ScalarKernelKind k) {
  return k == ScalarKernelKind::gaussian ? "gaussian" : "laplacian-l2";
}

inline ScalarKernelKind scalar_kernel_kind_from_string(const std::string& s) {
  if (s == "gaussian") return ScalarKernelKind::gaussian;
  if (s == "laplacian-l2" || s == "laplacian") return ScalarKernelKind::laplacian_l2;
  throw ArgumentError("scalar-kernel", "unknown kernel kind '" + s + "'");
}

struct ScalarKernelParams {
  ScalarKernelKind kind = ScalarKernelKind::gaussian;
  double sigma = 1.0;  // bandwidth, in L2 distance units

  void validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw ArgumentError("scalar-kernel", "sigma must be positive and finite");
    }
  }
};

/// Kernel value from a precomputed squared (L2)^p distance.
inline double kernel_from_distance_sq(double d2, const ScalarKernelParams& params) {
  switch (params.kind) {
    case ScalarKernelKind::gaussian:
      return std::exp(-d2 / (2.0 * params.sigma * params.sigma));
    case ScalarKernelKind::laplacian_l2:
      return std::exp(-std::sqrt(d2) / params.sigma);
  }
  return 0.0;
}

inline double eval_scalar_kernel(const FunctionalObservation& a, const FunctionalObservation& b,
                                 const ScalarKernelParams& params) {
  return kernel_from_distance_sq(l2p_distance_sq(a, b), params);
}

/// Dense Gram matrix. Only the upper triangle is evaluated and then mirrored,
/// so the result is exactly symmetric.
inline Eigen::MatrixXd gram_matrix(std::span<const FunctionalObservation> data,
                                   const ScalarKernelParams& params, std::size_t workers = 1) {
  if (data.empty()) throw ArgumentError("scalar-kernel", "Gram matrix of an empty data set");
  params.validate();
  const auto n = static_cast<Eigen::Index>(data.size());
  Eigen::MatrixXd g(n, n);
  parallel_for(data.size(), workers, [&](std::size_t i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (Eigen::Index c = r; c < n; ++c) {
      g(r, c) = eval_scalar_kernel(data[i], data[static_cast<std::size_t>(c)], params);
    }
  });
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < r; ++c) g(r, c) = g(c, r);
  }
  return g;
}

/// Kernel values G(x, data_j) for every j.
inline Eigen::VectorXd kernel_row(const FunctionalObservation& x,
                                  std::span<const FunctionalObservation> data,
                                  const ScalarKernelParams& params) {
  Eigen::VectorXd row(static_cast<Eigen::Index>(data.size()));
  for (std::size_t j = 0; j < data.size(); ++j) {
    row(static_cast<Eigen::Index>(j)) = eval_scalar_kernel(x, data[j], params);
  }
  return row;
}

/// Median of the pairwise (L2)^p distances; falls back to 1 when all points coincide.
inline double median_heuristic_sigma(std::span<const FunctionalObservation> data) {
  std::vector<double> d;
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = i + 1; j < data.size(); ++j) {
      d.push_back(std::sqrt(l2p_distance_sq(data[i], data[j])));
    }
  }
  if (d.empty()) return 1.0;
  const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  double med = *mid;
  if (d.size() % 2 == 0) {
    med = 0.5 * (med + *std::max_element(d.begin(), mid));
  }
  return med > 0.0 ? med : 1.0;
}

/// Eigenvalues in descending order and the matching orthonormal eigenvectors
/// (one per column).
struct GramEigen {
  Eigen::VectorXd alpha;
  Eigen::MatrixXd vectors;

  std::size_t size() const noexcept { return static_cast<std::size_t>(alpha.size()); }

  /// Sets round-off negatives to zero.
  void clamp_negative() {
    for (Eigen::Index i = 0; i < alpha.size(); ++i) alpha(i) = std::max(alpha(i), 0.0);
  }
};

struct JacobiOptions {
  int max_sweeps = 100;
  double symmetry_tolerance = 1e-10;
};

/// Cyclic Jacobi eigensolver for a dense symmetric matrix.
inline GramEigen sym_eigen(const Eigen::MatrixXd& m, JacobiOptions opts = {}) {
  const Eigen::Index n = m.rows();
  if (n == 0 || m.cols() != n) {
    throw ArgumentError("scalar-kernel", "sym_eigen needs a non-empty square matrix");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > opts.symmetry_tolerance * scale) {
    throw ArgumentError("scalar-kernel", "sym_eigen input is not symmetric");
  }

  Eigen::MatrixXd a = 0.5 * (m + m.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double total = a.norm();

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) s += 2.0 * a(p, q) * a(p, q);
    return std::sqrt(s);
  };

  int sweep = 0;
  double off = off_norm();
  // Off-diagonal mass left after a converged sweep is pure round-off.
  const double target = 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(n) *
                        std::max(total, std::numeric_limits<double>::min());
  while (off > target) {
    if (sweep == opts.max_sweeps) {
      throw NumericError("scalar-kernel", "Jacobi did not converge after " +
                                              std::to_string(sweep) +
                                              " sweeps (off-diagonal norm " +
                                              std::to_string(off) + ", matrix norm " +
                                              std::to_string(total) + ")");
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // Rotation angle that annihilates a(p,q); smaller root for stability.
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    ++sweep;
    off = off_norm();
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });
  GramEigen out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.alpha(k) = a(src, src);
    out.vectors.col(k) = v.col(src);
  }
  return out;
}

}  // namespace frlsc

#pragma once

// Sampled representation of L2([0,1]) curves and vectors of curves.
//
// Every curve lives on a uniform grid t_a = a / (m - 1), a = 0..m-1, and
// integrals are taken with the composite trapezoid rule. A grid is therefore
// fully described by its point count.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "frlsc/errors.hpp"

namespace frlsc {

class Grid {
 public:
  explicit Grid(std::size_t m) : m_(m) {
    if (m < 2) {
      throw ArgumentError("function-space",
                          "grid needs at least 2 points, got " + std::to_string(m));
    }
  }

  std::size_t size() const noexcept { return m_; }
  double spacing() const noexcept { return 1.0 / static_cast<double>(m_ - 1); }

  double point(std::size_t a) const noexcept {
    // Last point pinned to 1 exactly.
    return a + 1 == m_ ? 1.0 : static_cast<double>(a) / static_cast<double>(m_ - 1);
  }

  /// Trapezoid weight of sample a: h inside, h/2 at both ends.
  double weight(std::size_t a) const noexcept {
    const double h = spacing();
    return (a == 0 || a + 1 == m_) ? 0.5 * h : h;
  }

  std::vector<double> points() const {
    std::vector<double> t(m_);
    for (std::size_t a = 0; a < m_; ++a) t[a] = point(a);
    return t;
  }

  std::vector<double> weights() const {
    std::vector<double> w(m_);
    for (std::size_t a = 0; a < m_; ++a) w[a] = weight(a);
    return w;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t m_;
};

class SampledFunction {
 public:
  explicit SampledFunction(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}

  SampledFunction(Grid grid, std::vector<double> values)
      : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
      throw StructuralError("function-space",
                            "sampled function has " + std::to_string(values_.size()) +
                                " values on a grid of " + std::to_string(grid_.size()));
    }
    for (double v : values_) {
      if (!std::isfinite(v)) {
        throw ArgumentError("function-space", "sampled function has a non-finite value");
      }
    }
  }

  /// Samples `f` at every grid point.
  template <typename F>
  static SampledFunction from(Grid grid, F&& f) {
    std::vector<double> v(grid.size());
    for (std::size_t a = 0; a < grid.size(); ++a) v[a] = f(grid.point(a));
    return SampledFunction(grid, std::move(v));
  }

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t a) const noexcept { return values_[a]; }
  double& operator[](std::size_t a) noexcept { return values_[a]; }

  SampledFunction& operator+=(const SampledFunction& o) {
    require_same(o);
    for (std::size_t a = 0; a < values_.size(); ++a) values_[a] += o.values_[a];
    return *this;
  }
  SampledFunction& operator-=(const SampledFunction& o) {
    require_same(o);
    for (std::size_t a = 0; a < values_.size(); ++a) values_[a] -= o.values_[a];
    return *this;
  }
  SampledFunction& operator*=(double s) noexcept {
    for (double& v : values_) v *= s;
    return *this;
  }
  /// this += s * o
  void axpy(double s, const SampledFunction& o) {
    require_same(o);
    for (std::size_t a = 0; a < values_.size(); ++a) values_[a] += s * o.values_[a];
  }

  friend SampledFunction operator+(SampledFunction a, const SampledFunction& b) { return a += b; }
  friend SampledFunction operator-(SampledFunction a, const SampledFunction& b) { return a -= b; }
  friend SampledFunction operator*(double s, SampledFunction a) { return a *= s; }
  friend SampledFunction operator-(SampledFunction a) { return a *= -1.0; }

  friend bool operator==(const SampledFunction&, const SampledFunction&) = default;

 private:
  void require_same(const SampledFunction& o) const {
    if (!(o.grid_ == grid_)) {
      throw StructuralError("function-space", "grid mismatch");
    }
  }

  Grid grid_;
  std::vector<double> values_;
};

/// One input point: p curves on a shared grid.
class FunctionalObservation {
 public:
  explicit FunctionalObservation(std::vector<SampledFunction> channels)
      : channels_(std::move(channels)) {
    if (channels_.empty()) {
      throw ArgumentError("function-space", "observation needs at least one channel");
    }
    for (const auto& c : channels_) {
      if (!(c.grid() == channels_.front().grid())) {
        throw StructuralError("function-space", "observation channels on different grids");
      }
    }
  }

  std::size_t channels() const noexcept { return channels_.size(); }
  const Grid& grid() const noexcept { return channels_.front().grid(); }
  const SampledFunction& operator[](std::size_t c) const noexcept { return channels_[c]; }
  std::span<const SampledFunction> channel_list() const noexcept { return channels_; }

  friend bool operator==(const FunctionalObservation&, const FunctionalObservation&) = default;

 private:
  std::vector<SampledFunction> channels_;
};

inline void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) {
    throw StructuralError("function-space", "grid mismatch (m=" + std::to_string(a.size()) +
                                                " vs m=" + std::to_string(b.size()) + ")");
  }
}

/// Trapezoid approximation of the integral of f*g over [0,1].
inline double l2_inner(const SampledFunction& f, const SampledFunction& g) {
  require_same_grid(f.grid(), g.grid());
  const std::size_t m = f.size();
  double interior = 0.0;
  for (std::size_t a = 1; a + 1 < m; ++a) interior += f[a] * g[a];
  const double ends = 0.5 * (f[0] * g[0] + f[m - 1] * g[m - 1]);
  return f.grid().spacing() * (interior + ends);
}

inline double l2_norm_sq(const SampledFunction& f) { return l2_inner(f, f); }
inline double l2_norm(const SampledFunction& f) { return std::sqrt(l2_inner(f, f)); }

/// Squared distance in (L2)^p: sum over channels of ||a_c - b_c||^2.
inline double l2p_distance_sq(const FunctionalObservation& a, const FunctionalObservation& b) {
  if (a.channels() != b.channels()) {
    throw StructuralError("function-space", "channel count mismatch (" +
                                                std::to_string(a.channels()) + " vs " +
                                                std::to_string(b.channels()) + ")");
  }
  require_same_grid(a.grid(), b.grid());
  const Grid& grid = a.grid();
  const std::size_t m = grid.size();
  double total = 0.0;
  for (std::size_t c = 0; c < a.channels(); ++c) {
    const auto x = a[c].values();
    const auto y = b[c].values();
    double interior = 0.0;
    for (std::size_t s = 1; s + 1 < m; ++s) {
      const double d = x[s] - y[s];
      interior += d * d;
    }
    const double d0 = x[0] - y[0];
    const double d1 = x[m - 1] - y[m - 1];
    total += grid.spacing() * (interior + 0.5 * (d0 * d0 + d1 * d1));
  }
  return total;
}

/// Inner product on (L2)^n: sum_j <y_j, z_j>.
inline double vector_inner(std::span<const SampledFunction> y, std::span<const SampledFunction> z) {
  if (y.size() != z.size()) {
    throw StructuralError("function-space", "function vectors of different length (" +
                                                std::to_string(y.size()) + " vs " +
                                                std::to_string(z.size()) + ")");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) total += l2_inner(y[j], z[j]);
  return total;
}

/// Linear interpolation of uniformly spaced samples onto a grid of `target` points.
inline std::vector<double> resample_linear(std::span<const double> values, std::size_t target) {
  if (values.size() < 2 || target < 2) {
    throw ArgumentError("function-space", "resampling needs at least 2 points on both sides");
  }
  const Grid dst(target);
  std::vector<double> out(target);
  const double scale = static_cast<double>(values.size() - 1);
  for (std::size_t a = 0; a < target; ++a) {
    const double u = dst.point(a) * scale;
    std::size_t lo = static_cast<std::size_t>(std::floor(u));
    if (lo >= values.size() - 1) lo = values.size() - 2;
    const double frac = u - static_cast<double>(lo);
    out[a] = (1.0 - frac) * values[lo] + frac * values[lo + 1];
  }
  return out;
}

}  // namespace frlsc

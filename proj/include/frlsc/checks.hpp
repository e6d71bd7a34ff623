#pragma once

// Numerical self-checks: spectral solve against the dense discretized system,
// operator eigenpairs against quadrature, positivity of the block Gram matrix
// and the reproducing property. Each check reports a measured error next to
// the bound it must stay under.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "frlsc/function_space.hpp"
#include "frlsc/integral_operator.hpp"
#include "frlsc/scalar_kernel.hpp"
#include "frlsc/solver.hpp"

namespace frlsc {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool passed = false;

  nlohmann::json to_json() const {
    return {{"name", name}, {"measured", measured}, {"bound", bound}, {"passed", passed}};
  }
};

inline CheckResult make_check(std::string name, double measured, double bound) {
  return {std::move(name), measured, bound, std::isfinite(measured) && measured <= bound};
}

/// Random smooth inputs and labels for the checks.
struct RandomInstance {
  Grid grid{2};
  std::vector<FunctionalObservation> inputs;
  std::vector<SampledFunction> labels;
  ScalarKernelParams params;
};

inline SampledFunction random_smooth_curve(const Grid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  double a[3], ph[3];
  for (int q = 0; q < 3; ++q) {
    a[q] = normal(rng);
    ph[q] = phase(rng);
  }
  return SampledFunction::from(grid, [&](double t) {
    double s = 0.0;
    for (int q = 0; q < 3; ++q) s += a[q] * std::sin((q + 1) * std::numbers::pi * t + ph[q]);
    return s;
  });
}

/// Random quadratic c0 + c1 t + c2 t^2.
inline SampledFunction random_quadratic(const Grid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double c0 = normal(rng), c1 = normal(rng), c2 = normal(rng);
  return SampledFunction::from(grid, [&](double t) { return c0 + c1 * t + c2 * t * t; });
}

inline RandomInstance random_instance(std::size_t n, std::size_t m, std::size_t p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RandomInstance inst;
  inst.grid = Grid(m);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<SampledFunction> ch;
    for (std::size_t c = 0; c < p; ++c) ch.push_back(random_smooth_curve(inst.grid, rng));
    inst.inputs.emplace_back(std::move(ch));
  }
  for (std::size_t i = 0; i < n; ++i) inst.labels.push_back(random_quadratic(inst.grid, rng));
  inst.params = {ScalarKernelKind::gaussian, median_heuristic_sigma(inst.inputs)};
  return inst;
}

/// Largest relative L2 gap between spectral and dense-solve beta functions.
inline double oracle_discrepancy(const RandomInstance& inst, std::size_t k, double lambda,
                                 TailPolicy tail = TailPolicy::regularized) {
  auto op = std::make_shared<const OperatorEigen>(operator_eigensystem(k, inst.grid));
  const auto set = prepare_training_set(inst.inputs, inst.params, op);
  const auto spectral = solve_beta(inst.labels, set->spectrum, lambda, tail);
  const auto dense = brute_force_solve(inst.labels, inst.inputs, inst.params, lambda, inst.grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    worst = std::max(worst, l2_norm(spectral[i] - dense[i]) / l2_norm(dense[i]));
  }
  return worst;
}

inline std::vector<CheckResult> check_oracle_equivalence(std::size_t n, std::size_t m, std::size_t p,
                                                         std::size_t k, double lambda,
                                                         std::size_t instances, std::uint64_t seed,
                                                         double bound = 1e-3) {
  std::vector<CheckResult> out;
  for (std::size_t s = 0; s < instances; ++s) {
    const auto inst = random_instance(n, m, p, seed + s);
    out.push_back(make_check("spectral vs dense solve, instance " + std::to_string(s),
                             oracle_discrepancy(inst, k, lambda), bound));
  }
  return out;
}

/// ||T w_i - delta_i w_i|| / delta_i and |g(mu_i)| for the first k eigenpairs.
inline std::vector<CheckResult> check_operator_spectrum(std::size_t k, std::size_t m,
                                                        double spectral_bound = 1e-3,
                                                        double root_bound = 1e-12) {
  const auto op = operator_eigensystem(k, Grid(m));
  std::vector<CheckResult> out;
  for (std::size_t i = 0; i < k; ++i) {
    const auto tw = apply_T_quadrature(op.w[i]);
    const double err = l2_norm(tw - op.delta[i] * op.w[i]) / op.delta[i];
    out.push_back(make_check("eigenpair " + std::to_string(i + 1) + " quadrature residual", err,
                             spectral_bound));
    out.push_back(make_check("root " + std::to_string(i + 1) + " |g(mu)|",
                             static_cast<double>(std::abs(mu_equation(op.mu[i]))), root_bound));
  }
  return out;
}

/// Matrix B(i, j) = <K(x_i, x_j) y_i, y_j> = G_ij <T y_i, y_j>.
inline Eigen::MatrixXd block_gram(const RandomInstance& inst) {
  const auto g = gram_matrix(inst.inputs, inst.params);
  const auto n = static_cast<Eigen::Index>(inst.inputs.size());
  std::vector<SampledFunction> ty;
  for (const auto& y : inst.labels) ty.push_back(apply_T_quadrature(y));
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      b(i, j) = g(i, j) * l2_inner(ty[static_cast<std::size_t>(i)], inst.labels[static_cast<std::size_t>(j)]);
    }
  }
  return 0.5 * (b + b.transpose());
}

/// -min(eig) / max(eig), which must stay below the tolerance.
inline double negative_eigen_ratio(const Eigen::MatrixXd& b) {
  const auto e = sym_eigen(b);
  const double top = std::max(e.alpha.maxCoeff(), std::numeric_limits<double>::min());
  return std::max(0.0, -e.alpha.minCoeff() / top);
}

/// Relative gap between <K(x,.)y, f>_F computed through the Gram algebra and
/// <f(x), y>_Y, for f = sum_j K(x_j,.) beta_j and x one of the x_j.
inline double reproducing_property_error(const RandomInstance& inst, std::size_t k, double lambda) {
  auto op = std::make_shared<const OperatorEigen>(operator_eigensystem(k, inst.grid));
  const auto set = prepare_training_set(inst.inputs, inst.params, op);
  const TrainedModel f = fit(set, inst.labels, lambda);
  double worst = 0.0;
  for (std::size_t a = 0; a < inst.inputs.size(); ++a) {
    const auto& x = inst.inputs[a];
    const auto& y = inst.labels[(a + 1) % inst.labels.size()];
    // <K(x,.)y, K(x_j,.)beta_j>_F = <K(x, x_j) y, beta_j>_Y
    const auto ty = apply_T_quadrature(y);
    double lhs = 0.0;
    for (std::size_t j = 0; j < inst.inputs.size(); ++j) {
      lhs += eval_scalar_kernel(x, inst.inputs[j], inst.params) * l2_inner(ty, f.beta()[j]);
    }
    const double rhs = l2_inner(predict(f, x), y);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
  }
  return worst;
}

}  // namespace frlsc

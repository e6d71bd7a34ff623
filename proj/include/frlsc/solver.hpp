#pragma once

// Functional RLSC with a separable kernel K(x, x') = G(x, x') T.
//
// The block Gram operator is the Kronecker product of the n x n scalar Gram
// matrix with T, so its eigenpairs are theta = alpha_i * delta_j with
// eigenfunction vectors z = v_i (x) w_j. (K + lambda I) beta = y is solved
// in that basis without ever forming an (n m) x (n m) matrix:
//
//   beta = sum_{i,j} (theta_ij + lambda)^-1 <z_ij, y> z_ij  (+ tail term)
//
// The truncated basis only spans the first k eigenfunctions of T. What y
// has outside that span is either dropped (TailPolicy::discard) or treated as
// lying in the null space of K and scaled by 1/lambda
// (TailPolicy::regularized). The second choice is exact up to
// alpha_max * delta_{k+1} / lambda and is the default.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "frlsc/errors.hpp"
#include "frlsc/function_space.hpp"
#include "frlsc/integral_operator.hpp"
#include "frlsc/scalar_kernel.hpp"

namespace frlsc {

enum class TailPolicy { regularized, discard };

inline std::string to_string(TailPolicy t) {
  return t == TailPolicy::regularized ? "regularized" : "discard";
}

inline TailPolicy tail_policy_from_string(const std::string& s) {
  if (s == "regularized") return TailPolicy::regularized;
  if (s == "discard") return TailPolicy::discard;
  throw ArgumentError("solver", "unknown tail policy '" + s + "'");
}

struct RegularizationConfig {
  double lambda = 1.0;
  std::size_t k = 8;
  TailPolicy tail = TailPolicy::regularized;

  void validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw ArgumentError("solver", "lambda must be positive and finite");
    }
    if (k == 0) throw ArgumentError("solver", "truncation level k must be at least 1");
  }
};

/// Eigensystem of G (x) T kept in factored form.
struct KroneckerEigen {
  GramEigen gram;  // alpha clamped at zero
  std::shared_ptr<const OperatorEigen> op;
  std::vector<double> theta;  // flat index i * k + j

  std::size_t n() const noexcept { return gram.size(); }
  std::size_t k() const noexcept { return op->k(); }
  std::size_t flat(std::size_t i, std::size_t j) const noexcept { return i * k() + j; }
  std::pair<std::size_t, std::size_t> split(std::size_t f) const noexcept {
    return {f / k(), f % k()};
  }

  /// Block `a` of eigenfunction (i, j) is v_i[a] * w_j. Built on demand only.
  std::vector<SampledFunction> eigenfunction(std::size_t i, std::size_t j) const {
    std::vector<SampledFunction> z;
    z.reserve(n());
    for (std::size_t a = 0; a < n(); ++a) {
      z.push_back(gram.vectors(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(i)) *
                  op->w[j]);
    }
    return z;
  }
};

inline KroneckerEigen kronecker_eigen(GramEigen gram, std::shared_ptr<const OperatorEigen> op) {
  if (!op || op->k() == 0) throw ArgumentError("solver", "operator eigensystem is empty");
  gram.clamp_negative();
  KroneckerEigen ke{std::move(gram), std::move(op), {}};
  ke.theta.resize(ke.n() * ke.k());
  for (std::size_t i = 0; i < ke.n(); ++i) {
    for (std::size_t j = 0; j < ke.k(); ++j) {
      ke.theta[ke.flat(i, j)] = ke.gram.alpha(static_cast<Eigen::Index>(i)) * ke.op->delta[j];
    }
  }
  return ke;
}

namespace detail {

inline void check_labels(std::span<const SampledFunction> yv, std::size_t n, const Grid& grid) {
  if (yv.size() != n) {
    throw StructuralError("solver", "expected " + std::to_string(n) + " label functions, got " +
                                        std::to_string(yv.size()));
  }
  for (const auto& y : yv) require_same_grid(y.grid(), grid);
}

/// P(i, j) = <w_j, y_i>.
inline Eigen::MatrixXd operator_projections(std::span<const SampledFunction> yv,
                                            const OperatorEigen& op) {
  Eigen::MatrixXd p(static_cast<Eigen::Index>(yv.size()), static_cast<Eigen::Index>(op.k()));
  for (std::size_t i = 0; i < yv.size(); ++i) {
    for (std::size_t j = 0; j < op.k(); ++j) {
      p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = l2_inner(op.w[j], yv[i]);
    }
  }
  return p;
}

}  // namespace detail

/// C(i, j) = <z_ij, y> for every retained eigenfunction of K.
inline Eigen::MatrixXd spectral_coefficients(std::span<const SampledFunction> yv,
                                             const KroneckerEigen& ke) {
  detail::check_labels(yv, ke.n(), ke.op->grid);
  return ke.gram.vectors.transpose() * detail::operator_projections(yv, *ke.op);
}

inline std::vector<SampledFunction> solve_beta(std::span<const SampledFunction> yv,
                                               const KroneckerEigen& ke, double lambda,
                                               TailPolicy tail = TailPolicy::regularized) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ArgumentError("solver", "lambda must be positive and finite");
  }
  detail::check_labels(yv, ke.n(), ke.op->grid);
  const auto& op = *ke.op;
  const Eigen::MatrixXd proj = detail::operator_projections(yv, op);
  Eigen::MatrixXd coeff = ke.gram.vectors.transpose() * proj;
  for (std::size_t i = 0; i < ke.n(); ++i) {
    for (std::size_t j = 0; j < ke.k(); ++j) {
      coeff(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) /=
          ke.theta[ke.flat(i, j)] + lambda;
    }
  }
  const Eigen::MatrixXd blocks = ke.gram.vectors * coeff;

  std::vector<SampledFunction> beta;
  beta.reserve(ke.n());
  for (std::size_t a = 0; a < ke.n(); ++a) {
    SampledFunction b(op.grid);
    if (tail == TailPolicy::regularized) {
      SampledFunction residual = yv[a];
      for (std::size_t j = 0; j < ke.k(); ++j) {
        residual.axpy(-proj(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(j)), op.w[j]);
      }
      b.axpy(1.0 / lambda, residual);
    }
    for (std::size_t j = 0; j < ke.k(); ++j) {
      b.axpy(blocks(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(j)), op.w[j]);
    }
    beta.push_back(std::move(b));
  }
  return beta;
}

/// Share of the label energy outside span{w_1..w_k}.
inline double discarded_energy_ratio(std::span<const SampledFunction> yv, const OperatorEigen& op) {
  double total = 0.0;
  double outside = 0.0;
  for (const auto& y : yv) {
    require_same_grid(y.grid(), op.grid);
    SampledFunction r = y;
    for (std::size_t j = 0; j < op.k(); ++j) r.axpy(-l2_inner(op.w[j], y), op.w[j]);
    total += l2_norm_sq(y);
    outside += l2_norm_sq(r);
  }
  return total > 0.0 ? outside / total : 0.0;
}

/// Bound on the relative effect of the eigenvalues dropped by truncation.
inline double truncation_tail_bound(const KroneckerEigen& ke, double lambda) {
  const double alpha_max = ke.gram.alpha.size() > 0 ? ke.gram.alpha.maxCoeff() : 0.0;
  return alpha_max * ke.op->next_delta / lambda;
}

/// Everything about a training problem that does not depend on the labels.
struct TrainingSet {
  Grid grid{2};
  std::vector<FunctionalObservation> inputs;
  ScalarKernelParams params;
  Eigen::MatrixXd gram;
  KroneckerEigen spectrum;
};

inline std::shared_ptr<const TrainingSet> prepare_training_set(
    std::vector<FunctionalObservation> inputs, const ScalarKernelParams& params,
    std::shared_ptr<const OperatorEigen> op, std::size_t workers = 1) {
  if (inputs.empty()) throw ArgumentError("solver", "no training inputs");
  if (!op) throw ArgumentError("solver", "missing operator eigensystem");
  const std::size_t p = inputs.front().channels();
  for (const auto& x : inputs) {
    require_same_grid(x.grid(), op->grid);
    if (x.channels() != p) throw StructuralError("solver", "training inputs differ in channel count");
  }
  auto gram = gram_matrix(inputs, params, workers);
  auto spectrum = kronecker_eigen(sym_eigen(gram), std::move(op));
  auto set = std::make_shared<TrainingSet>();
  set->grid = inputs.front().grid();
  set->inputs = std::move(inputs);
  set->params = params;
  set->gram = std::move(gram);
  set->spectrum = std::move(spectrum);
  return set;
}

/// Coefficient functions beta_j of f*(x) = sum_j G(x, x_j) T beta_j.
class TrainedModel {
 public:
  TrainedModel(std::shared_ptr<const TrainingSet> set, std::vector<SampledFunction> beta,
               double lambda, TailPolicy tail)
      : set_(std::move(set)), beta_(std::move(beta)), lambda_(lambda), tail_(tail) {
    if (!set_) throw ArgumentError("solver", "model without training set");
    if (!(lambda_ > 0.0)) throw ArgumentError("solver", "lambda must be positive");
    detail::check_labels(beta_, set_->inputs.size(), set_->grid);
    t_beta_.reserve(beta_.size());
    for (const auto& b : beta_) t_beta_.push_back(apply_operator(kind(), b));
  }

  const TrainingSet& training_set() const noexcept { return *set_; }
  const std::shared_ptr<const TrainingSet>& shared_training_set() const noexcept { return set_; }
  const std::vector<SampledFunction>& beta() const noexcept { return beta_; }
  /// T beta_j, cached for prediction.
  const std::vector<SampledFunction>& operator_beta() const noexcept { return t_beta_; }
  double lambda() const noexcept { return lambda_; }
  TailPolicy tail() const noexcept { return tail_; }
  const Grid& grid() const noexcept { return set_->grid; }
  const OperatorEigen& op() const noexcept { return *set_->spectrum.op; }
  OperatorKind kind() const noexcept { return set_->spectrum.op->kind; }

 private:
  std::shared_ptr<const TrainingSet> set_;
  std::vector<SampledFunction> beta_;
  double lambda_;
  TailPolicy tail_;
  std::vector<SampledFunction> t_beta_;
};

inline TrainedModel fit(std::shared_ptr<const TrainingSet> set, std::span<const SampledFunction> yv,
                        double lambda, TailPolicy tail = TailPolicy::regularized) {
  auto beta = solve_beta(yv, set->spectrum, lambda, tail);
  return TrainedModel(std::move(set), std::move(beta), lambda, tail);
}

/// f*(x) given the kernel row G(x, x_j).
inline SampledFunction predict_from_kernel_row(const TrainedModel& model,
                                               const Eigen::VectorXd& row) {
  SampledFunction out(model.grid());
  const auto& tb = model.operator_beta();
  for (std::size_t j = 0; j < tb.size(); ++j) out.axpy(row(static_cast<Eigen::Index>(j)), tb[j]);
  return out;
}

inline SampledFunction predict(const TrainedModel& model, const FunctionalObservation& x) {
  const auto& set = model.training_set();
  require_same_grid(x.grid(), set.grid);
  if (x.channels() != set.inputs.front().channels()) {
    throw StructuralError("solver", "observation has " + std::to_string(x.channels()) +
                                        " channels, model expects " +
                                        std::to_string(set.inputs.front().channels()));
  }
  return predict_from_kernel_row(model, kernel_row(x, set.inputs, set.params));
}

/// ||f*||_F^2 = sum_{i,j} G(x_i, x_j) <T beta_i, beta_j>.
inline double rkhs_norm_sq(const TrainedModel& model) {
  const auto& g = model.training_set().gram;
  const auto& beta = model.beta();
  const auto& tb = model.operator_beta();
  double total = 0.0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    for (std::size_t j = 0; j < beta.size(); ++j) {
      total += g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * l2_inner(tb[i], beta[j]);
    }
  }
  return total;
}

/// Tikhonov objective sum_i ||y_i - f*(x_i)||^2 + lambda ||f*||_F^2.
inline double objective(const TrainedModel& model, std::span<const SampledFunction> yv) {
  const auto& set = model.training_set();
  detail::check_labels(yv, set.inputs.size(), set.grid);
  double loss = 0.0;
  for (std::size_t i = 0; i < yv.size(); ++i) {
    const Eigen::VectorXd row = set.gram.row(static_cast<Eigen::Index>(i)).transpose();
    loss += l2_norm_sq(yv[i] - predict_from_kernel_row(model, row));
  }
  return loss + model.lambda() * rkhs_norm_sq(model);
}

/// Largest n * m accepted by brute_force_solve.
inline constexpr std::size_t brute_force_limit = 4000;

/// Dense (G (x) D + lambda I) beta = y with D the quadrature matrix of the
/// operator. Test and verification oracle only.
inline std::vector<SampledFunction> brute_force_solve(std::span<const SampledFunction> yv,
                                                      std::span<const FunctionalObservation> data,
                                                      const ScalarKernelParams& params,
                                                      double lambda, const Grid& grid,
                                                      OperatorKind kind = OperatorKind::exponential) {
  if (!(lambda > 0.0)) throw ArgumentError("solver", "lambda must be positive");
  const std::size_t n = data.size();
  const std::size_t m = grid.size();
  if (n * m > brute_force_limit) {
    throw ArgumentError("solver", "brute-force system of order " + std::to_string(n * m) +
                                      " exceeds the limit of " + std::to_string(brute_force_limit));
  }
  detail::check_labels(yv, n, grid);
  const Eigen::MatrixXd g = gram_matrix(data, params);
  const Eigen::MatrixXd d = dense_operator_matrix(kind, grid);
  const auto nm = static_cast<Eigen::Index>(n * m);
  const auto mm = static_cast<Eigen::Index>(m);
  Eigen::MatrixXd a(nm, nm);
  Eigen::VectorXd rhs(nm);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j) {
      a.block(i * mm, j * mm, mm, mm) = g(i, j) * d;
    }
    for (Eigen::Index s = 0; s < mm; ++s) {
      rhs(i * mm + s) = yv[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)];
    }
  }
  a.diagonal().array() += lambda;
  const Eigen::VectorXd x = a.partialPivLu().solve(rhs);
  std::vector<SampledFunction> beta;
  beta.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(m);
    for (std::size_t s = 0; s < m; ++s) v[s] = x(static_cast<Eigen::Index>(i * m + s));
    beta.emplace_back(grid, std::move(v));
  }
  return beta;
}

}  // namespace frlsc

#pragma once

// Classical scalar RLSC on concatenated samples, the reference method.
//
// Each observation becomes one row [channel 0 samples, channel 1 samples, ...]
// and a Gaussian kernel on Euclidean distance is used. Training solves
// (K + lambda I) c = y once per class with a Cholesky factorization.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frlsc/classifier.hpp"
#include "frlsc/data.hpp"
#include "frlsc/errors.hpp"
#include "frlsc/parallel.hpp"

namespace frlsc {

struct VectorizedDataset {
  Eigen::MatrixXd rows;  // n x (p * m), channel-major
  std::vector<int> labels;
  std::vector<std::string> ids;
  std::map<int, std::string> class_names;
  std::size_t channels = 0;
  std::size_t m = 0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(rows.rows()); }
};

inline Eigen::VectorXd vectorize(const FunctionalObservation& x) {
  const std::size_t m = x.grid().size();
  Eigen::VectorXd row(static_cast<Eigen::Index>(x.channels() * m));
  for (std::size_t c = 0; c < x.channels(); ++c) {
    for (std::size_t a = 0; a < m; ++a) row(static_cast<Eigen::Index>(c * m + a)) = x[c][a];
  }
  return row;
}

inline VectorizedDataset vectorize(const Dataset& data) {
  data.validate();
  VectorizedDataset vd;
  vd.channels = data.channels();
  vd.m = data.grid.size();
  vd.labels = data.labels;
  vd.class_names = data.class_names;
  vd.rows.resize(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(vd.channels * vd.m));
  for (std::size_t i = 0; i < data.size(); ++i) {
    vd.rows.row(static_cast<Eigen::Index>(i)) = vectorize(data.observations[i]).transpose();
    vd.ids.push_back(data.id_of(i));
  }
  return vd;
}

/// Inverse of vectorize.
inline Dataset devectorize(const VectorizedDataset& vd) {
  Dataset data;
  data.grid = Grid(vd.m);
  data.labels = vd.labels;
  data.ids = vd.ids;
  data.class_names = vd.class_names;
  for (Eigen::Index i = 0; i < vd.rows.rows(); ++i) {
    std::vector<SampledFunction> channels;
    for (std::size_t c = 0; c < vd.channels; ++c) {
      std::vector<double> v(vd.m);
      for (std::size_t a = 0; a < vd.m; ++a) v[a] = vd.rows(i, static_cast<Eigen::Index>(c * vd.m + a));
      channels.emplace_back(data.grid, std::move(v));
    }
    data.observations.emplace_back(std::move(channels));
  }
  return data;
}

inline double gaussian_euclidean(const Eigen::Ref<const Eigen::VectorXd>& a,
                                 const Eigen::Ref<const Eigen::VectorXd>& b, double sigma) {
  return std::exp(-(a - b).squaredNorm() / (2.0 * sigma * sigma));
}

/// Median pairwise Euclidean distance between rows (1 if all coincide).
inline double median_heuristic_sigma(const Eigen::MatrixXd& rows) {
  std::vector<double> d;
  for (Eigen::Index i = 0; i < rows.rows(); ++i)
    for (Eigen::Index j = i + 1; j < rows.rows(); ++j) d.push_back((rows.row(i) - rows.row(j)).norm());
  if (d.empty()) return 1.0;
  const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  double med = *mid;
  if (d.size() % 2 == 0) med = 0.5 * (med + *std::max_element(d.begin(), mid));
  return med > 0.0 ? med : 1.0;
}

struct RlscModel {
  Eigen::MatrixXd train_rows;
  std::vector<int> classes;
  Eigen::MatrixXd coef;  // n x N, one column per class
  double sigma = 1.0;
  double lambda = 1.0;
};

inline Eigen::MatrixXd rlsc_gram(const Eigen::MatrixXd& rows, double sigma) {
  const Eigen::Index n = rows.rows();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      k(i, j) = gaussian_euclidean(rows.row(i).transpose(), rows.row(j).transpose(), sigma);
      k(j, i) = k(i, j);
    }
  }
  return k;
}

/// One-vs-all targets: +1 for the class, -1 otherwise. Same solve for every class.
inline RlscModel train_rlsc(const VectorizedDataset& vd, double sigma, double lambda,
                            std::size_t workers = 1) {
  if (!(lambda > 0.0)) throw ArgumentError("baseline", "lambda must be positive");
  if (!(sigma > 0.0)) throw ArgumentError("baseline", "sigma must be positive");
  if (vd.size() == 0) throw ArgumentError("baseline", "empty training set");
  RlscModel model;
  model.train_rows = vd.rows;
  model.sigma = sigma;
  model.lambda = lambda;
  model.classes = vd.labels;
  std::sort(model.classes.begin(), model.classes.end());
  model.classes.erase(std::unique(model.classes.begin(), model.classes.end()), model.classes.end());

  Eigen::MatrixXd a = rlsc_gram(vd.rows, sigma);
  a.diagonal().array() += lambda;
  const Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericError("baseline", "Cholesky factorization of K + lambda I failed");
  }
  const auto n = static_cast<Eigen::Index>(vd.size());
  Eigen::MatrixXd y(n, static_cast<Eigen::Index>(model.classes.size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < model.classes.size(); ++c) {
      y(i, static_cast<Eigen::Index>(c)) = vd.labels[static_cast<std::size_t>(i)] == model.classes[c] ? 1.0 : -1.0;
    }
  }
  model.coef.resize(n, y.cols());
  parallel_for(static_cast<std::size_t>(y.cols()), workers, [&](std::size_t c) {
    model.coef.col(static_cast<Eigen::Index>(c)) = llt.solve(y.col(static_cast<Eigen::Index>(c)));
  });
  const double residual = (a * model.coef - y).norm();
  if (!(residual <= 1e-8 * y.norm())) {
    throw NumericError("baseline", "RLSC solve residual " + std::to_string(residual) +
                                       " exceeds 1e-8 of the target norm");
  }
  return model;
}

/// Scores f_c(x) = sum_j c_j K(x, x_j) for every class.
inline Classification classify_rlsc(const RlscModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.train_rows.cols()) {
    throw StructuralError("baseline", "feature vector of length " + std::to_string(x.size()) +
                                          ", model expects " + std::to_string(model.train_rows.cols()));
  }
  Eigen::VectorXd k(model.train_rows.rows());
  for (Eigen::Index j = 0; j < k.size(); ++j) {
    k(j) = gaussian_euclidean(x, model.train_rows.row(j).transpose(), model.sigma);
  }
  const Eigen::VectorXd s = model.coef.transpose() * k;
  Classification out;
  out.scores.assign(s.data(), s.data() + s.size());
  out.label = model.classes[argmax_lowest(out.scores)];
  return out;
}

inline Classification classify_rlsc(const RlscModel& model, const FunctionalObservation& x) {
  return classify_rlsc(model, vectorize(x));
}

inline Evaluation evaluate_rlsc(const RlscModel& model, const VectorizedDataset& test,
                                std::size_t workers = 1) {
  if (test.size() == 0) throw ArgumentError("baseline", "empty test set");
  std::vector<int> classes = model.classes;
  for (int l : test.labels) {
    if (std::find(classes.begin(), classes.end(), l) == classes.end()) classes.push_back(l);
  }
  std::sort(classes.begin(), classes.end());
  Evaluation ev{ConfusionMatrix(classes), std::vector<Classification>(test.size())};
  parallel_for(test.size(), workers, [&](std::size_t i) {
    ev.decisions[i] = classify_rlsc(model, Eigen::VectorXd(test.rows.row(static_cast<Eigen::Index>(i)).transpose()));
  });
  for (std::size_t i = 0; i < test.size(); ++i) ev.confusion.add(ev.decisions[i].label, test.labels[i]);
  return ev;
}

/// Same hold-out protocol and grids as tune_functional, on Euclidean bandwidths.
inline TuningResult tune_rlsc(const Dataset& train, const TuningGrid& grid, std::size_t workers = 1) {
  grid.validate();
  const Split parts = split(train, 1.0 - grid.validation_fraction, grid.seed);
  const VectorizedDataset tr = vectorize(parts.train);
  const VectorizedDataset va = vectorize(parts.test);
  const double base = grid.sigma_base.value_or(median_heuristic_sigma(tr.rows));
  TuningResult result;
  for (double factor : grid.sigma_factors) {
    for (double lambda : grid.lambdas) {
      const auto model = train_rlsc(tr, factor * base, lambda, workers);
      result.consider({factor * base, lambda, evaluate_rlsc(model, va, workers).accuracy()});
    }
  }
  return result;
}

}  // namespace frlsc

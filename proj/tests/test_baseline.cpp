#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "frlsc/baseline.hpp"
#include "frlsc/checks.hpp"

using namespace frlsc;

namespace {

Dataset small_lag(std::size_t per_class, std::uint64_t seed) {
  SynthConfig cfg;
  cfg.n_per_class = per_class;
  cfg.classes = 3;
  cfg.channels = 2;
  cfg.m = 16;
  cfg.seed = seed;
  return synth_lag_dataset(cfg);
}

}  // namespace

TEST(Vectorize, LayoutAndInverse) {
  const Grid g(3);
  Dataset d;
  d.grid = g;
  d.observations.emplace_back(std::vector<SampledFunction>{SampledFunction(g, {1, 2, 3}), SampledFunction(g, {4, 5, 6})});
  d.labels = {0};
  const auto vd = vectorize(d);
  ASSERT_EQ(vd.rows.cols(), 6);
  for (int a = 0; a < 6; ++a) EXPECT_EQ(vd.rows(0, a), a + 1.0);

  Dataset one;
  one.grid = g;
  one.observations.emplace_back(std::vector<SampledFunction>{SampledFunction(g, {7, 8, 9})});
  one.labels = {2};
  const auto v1 = vectorize(one);
  EXPECT_EQ(v1.rows.row(0).transpose(), Eigen::Vector3d(7, 8, 9));

  const auto data = small_lag(4, 1);
  const auto back = devectorize(vectorize(data));
  EXPECT_EQ(back.labels, data.labels);
  EXPECT_EQ(back.ids, data.ids);
  for (std::size_t i = 0; i < data.size(); ++i) EXPECT_TRUE(back.observations[i] == data.observations[i]);
}

TEST(Vectorize, MixedGridsRejected) {
  Dataset d;
  d.grid = Grid(3);
  d.observations.emplace_back(std::vector<SampledFunction>{SampledFunction(Grid(4))});
  d.labels = {0};
  EXPECT_THROW(vectorize(d), StructuralError);
}

TEST(TrainRlsc, SinglePoint) {
  VectorizedDataset vd;
  vd.rows = Eigen::MatrixXd::Ones(2, 3);
  vd.rows.row(1) *= 2.0;
  vd.labels = {0, 1};
  const double lambda = 0.25;
  // two points: c solves [[1, k], [k, 1]] + lambda I against (1, -1)
  const auto model = train_rlsc(vd, 1.5, lambda);
  const double k = std::exp(-3.0 / (2.0 * 1.5 * 1.5));
  EXPECT_NEAR(model.coef(0, 0), 1.0 / (1.0 + lambda - k), 1e-14);

  VectorizedDataset single;
  single.rows = Eigen::MatrixXd::Zero(1, 2);
  single.labels = {4};
  const auto m1 = train_rlsc(single, 1.0, lambda);
  EXPECT_NEAR(m1.coef(0, 0), 1.0 / (1.0 + lambda), 1e-15);
}

TEST(TrainRlsc, DuplicatePointsWithOppositeLabelsScoreZero) {
  VectorizedDataset vd;
  vd.rows = Eigen::MatrixXd::Ones(2, 4);
  vd.labels = {0, 1};
  const auto model = train_rlsc(vd, 1.0, 0.1);
  const auto c = classify_rlsc(model, Eigen::VectorXd(Eigen::VectorXd::Ones(4)));
  EXPECT_NEAR(c.scores[0], 0.0, 1e-15);
  EXPECT_NEAR(c.scores[1], 0.0, 1e-15);
  EXPECT_EQ(c.label, 0);
}

TEST(TrainRlsc, ResidualAndErrors) {
  const auto vd = vectorize(small_lag(8, 2));
  const double sigma = median_heuristic_sigma(vd.rows);
  const auto model = train_rlsc(vd, sigma, 1e-3);
  Eigen::MatrixXd a = rlsc_gram(vd.rows, sigma);
  a.diagonal().array() += 1e-3;
  for (std::size_t c = 0; c < model.classes.size(); ++c) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(vd.size()));
    for (std::size_t i = 0; i < vd.size(); ++i) y(static_cast<Eigen::Index>(i)) = vd.labels[i] == model.classes[c] ? 1.0 : -1.0;
    EXPECT_LE((a * model.coef.col(static_cast<Eigen::Index>(c)) - y).norm(), 1e-8 * y.norm());
  }
  EXPECT_THROW(train_rlsc(vd, sigma, 0.0), ArgumentError);
  EXPECT_THROW(train_rlsc(vd, -1.0, 1.0), ArgumentError);
}

TEST(ClassifyRlsc, TwoClassSignAndSeparableClusters) {
  auto data = small_lag(10, 3);
  for (int& l : data.labels) l = l == 0 ? 0 : 1;
  const auto vd = vectorize(data);
  const auto model = train_rlsc(vd, median_heuristic_sigma(vd.rows), 1e-4);
  EXPECT_EQ(evaluate_rlsc(model, vd).accuracy(), 1.0);
  for (Eigen::Index i = 0; i < vd.rows.rows(); ++i) {
    const auto c = classify_rlsc(model, Eigen::VectorXd(vd.rows.row(i).transpose()));
    EXPECT_NEAR(c.scores[1], -c.scores[0], 1e-12);
    EXPECT_EQ(c.label, c.scores[0] >= c.scores[1] ? 0 : 1);
  }
}

TEST(ClassifyRlsc, DeterministicAcrossWorkers) {
  const auto data = small_lag(10, 4);
  const auto parts = split(data, 0.5, 4);
  const auto tr = vectorize(parts.train), te = vectorize(parts.test);
  const double sigma = median_heuristic_sigma(tr.rows);
  const auto a = evaluate_rlsc(train_rlsc(tr, sigma, 0.1, 1), te, 1);
  const auto b = evaluate_rlsc(train_rlsc(tr, sigma, 0.1, 3), te, 4);
  EXPECT_EQ(a.confusion.counts, b.confusion.counts);
  for (std::size_t i = 0; i < a.decisions.size(); ++i) EXPECT_EQ(a.decisions[i].scores, b.decisions[i].scores);
}

TEST(Parity, IdentityOperatorMatchesBaselineOnConstantLabels) {
  // Curves that vanish at both ends make the trapezoid distance exactly h
  // times the squared Euclidean one, so sigma_fun^2 = h * sigma_base^2.
  std::mt19937_64 rng(10);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Grid g(21);
  Dataset d;
  d.grid = g;
  for (int c = 0; c < 3; ++c) {
    for (int r = 0; r < 6; ++r) {
      std::vector<double> v(g.size(), 0.0);
      for (std::size_t a = 1; a + 1 < g.size(); ++a) v[a] = 0.3 * c + normal(rng);
      d.observations.emplace_back(std::vector<SampledFunction>{SampledFunction(g, v)});
      d.labels.push_back(c);
    }
  }
  const auto vd = vectorize(d);
  const double sigma_base = median_heuristic_sigma(vd.rows);
  const double sigma_fun = std::sqrt(g.spacing()) * sigma_base;
  const double lambda = 0.05;
  const auto base = train_rlsc(vd, sigma_base, lambda);
  const LabelScheme constant{LabelKind::constant, 1.0, 0.5};
  const auto fun = train_multiclass(d, {lambda, g.size(), TailPolicy::regularized},
                                    {ScalarKernelKind::gaussian, sigma_fun}, constant, 1, OperatorKind::identity);
  auto probe = random_instance(5, 21, 1, 3).inputs;
  for (auto& x : probe) {
    std::vector<double> v(x[0].values().begin(), x[0].values().end());
    v.front() = v.back() = 0.0;
    x = FunctionalObservation(std::vector<SampledFunction>{SampledFunction(g, v)});
    const auto a = classify(fun, x);
    const auto b = classify_rlsc(base, x);
    for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(a.scores[c], b.scores[c], 1e-6);
  }
  for (const auto& x : d.observations) {
    const auto a = classify(fun, x);
    const auto b = classify_rlsc(base, x);
    for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(a.scores[c], b.scores[c], 1e-6);
  }
}

TEST(TuneRlsc, SameProtocolAsFunctional) {
  const auto data = small_lag(10, 5);
  TuningGrid grid;
  grid.sigma_factors = {0.5, 1.0};
  grid.lambdas = {0.01, 1.0};
  const auto r = tune_rlsc(data, grid);
  EXPECT_EQ(r.trials.size(), 4u);
  EXPECT_GE(r.validation_accuracy, 0.0);
  const auto again = tune_rlsc(data, grid);
  EXPECT_EQ(again.sigma, r.sigma);
  EXPECT_EQ(again.lambda, r.lambda);
}

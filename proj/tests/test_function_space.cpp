#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "frlsc/function_space.hpp"
#include "oracles.hpp"

using namespace frlsc;

namespace {

SampledFunction random_function(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(g.size());
  for (auto& x : v) x = n(rng);
  return SampledFunction(g, v);
}

}  // namespace

TEST(Grid, EndpointsAndSpacing) {
  const Grid g(11);
  EXPECT_EQ(g.point(0), 0.0);
  EXPECT_EQ(g.point(10), 1.0);
  for (std::size_t a = 1; a < g.size(); ++a) {
    EXPECT_NEAR(g.point(a) - g.point(a - 1), g.spacing(), 1e-12 * g.spacing());
  }
  EXPECT_THROW(Grid(1), ArgumentError);
}

TEST(Grid, WeightsSumToOne) {
  for (std::size_t m : {2u, 3u, 64u, 401u}) {
    double s = 0.0;
    for (double w : Grid(m).weights()) s += w;
    EXPECT_NEAR(s, 1.0, 1e-13);
  }
}

TEST(SampledFunction, RejectsBadValues) {
  const Grid g(4);
  EXPECT_THROW(SampledFunction(g, {1.0, 2.0}), StructuralError);
  EXPECT_THROW(SampledFunction(g, {1.0, 2.0, NAN, 0.0}), ArgumentError);
}

TEST(L2Inner, Constants) {
  for (std::size_t m : {2u, 7u, 100u}) {
    const Grid g(m);
    const auto one = SampledFunction::from(g, [](double) { return 1.0; });
    const auto zero = SampledFunction(g);
    EXPECT_NEAR(l2_inner(one, one), 1.0, 1e-14);
    EXPECT_EQ(l2_inner(zero, one), 0.0);
  }
}

TEST(L2Inner, LinearTimesLinear) {
  const Grid g(101);
  const auto t = SampledFunction::from(g, [](double x) { return x; });
  // trapezoid error for t^2 is h^2/6
  EXPECT_NEAR(l2_inner(t, t), 1.0 / 3.0, g.spacing() * g.spacing() / 6.0 + 1e-15);
  EXPECT_NEAR(l2_inner(t, t), oracle::trapezoid([](double x) { return x * x; }, 101), 1e-15);
}

TEST(L2Inner, GridMismatchIsStructural) {
  EXPECT_THROW(l2_inner(SampledFunction(Grid(4)), SampledFunction(Grid(5))), StructuralError);
}

TEST(L2Inner, QuadratureOrderIsTwo) {
  auto err = [](std::size_t m) {
    const Grid g(m);
    const auto f = SampledFunction::from(g, [](double x) { return std::exp(x); });
    const auto h = SampledFunction::from(g, [](double x) { return std::cos(3.0 * x); });
    const double exact = (std::exp(1.0) * (std::cos(3.0) + 3.0 * std::sin(3.0)) - 1.0) / 10.0;
    return std::abs(l2_inner(f, h) - exact);
  };
  for (std::size_t m : {17u, 33u, 65u, 129u}) {
    const double order = std::log2(err(m) / err(2 * m - 1));
    EXPECT_GE(order, 1.9) << "m=" << m;
  }
}

TEST(L2Inner, CauchySchwarzAndBilinearity) {
  std::mt19937_64 rng(3);
  const Grid g(37);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = random_function(g, rng);
    const auto h = random_function(g, rng);
    const auto k = random_function(g, rng);
    const double ip = l2_inner(f, h);
    EXPECT_LE(ip * ip, l2_norm_sq(f) * l2_norm_sq(h) + 1e-12);
    EXPECT_EQ(l2_inner(f, h), l2_inner(h, f));
    const double alpha = 1.7;
    const double lhs = l2_inner(alpha * f + h, k);
    const double rhs = alpha * l2_inner(f, k) + l2_inner(h, k);
    EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST(L2pDistance, Examples) {
  const Grid g(101);
  const auto one = SampledFunction::from(g, [](double) { return 1.0; });
  const SampledFunction zero(g);
  const FunctionalObservation a({one}), b({zero});
  EXPECT_EQ(l2p_distance_sq(a, a), 0.0);
  EXPECT_NEAR(l2p_distance_sq(a, b), 1.0, 1e-14);

  const auto t = SampledFunction::from(g, [](double x) { return x; });
  const auto u = SampledFunction::from(g, [](double x) { return 1.0 - x; });
  const FunctionalObservation two({t, u}), zeros({zero, zero});
  const double h2 = g.spacing() * g.spacing();
  EXPECT_NEAR(l2p_distance_sq(two, zeros), 2.0 / 3.0, h2 / 3.0 + 1e-14);
  EXPECT_EQ(l2p_distance_sq(two, zeros), l2p_distance_sq(zeros, two));
}

TEST(L2pDistance, Mismatch) {
  const Grid g(5);
  const FunctionalObservation a({SampledFunction(g)});
  const FunctionalObservation b({SampledFunction(g), SampledFunction(g)});
  EXPECT_THROW(l2p_distance_sq(a, b), StructuralError);
  EXPECT_THROW(FunctionalObservation({SampledFunction(g), SampledFunction(Grid(6))}), StructuralError);
}

TEST(VectorInner, Examples) {
  const Grid g(9);
  auto c = [&](double v) { return SampledFunction::from(g, [v](double) { return v; }); };
  const std::vector<SampledFunction> y{c(1), c(2)}, z{c(3), c(4)}, zero{c(0), c(0)};
  EXPECT_NEAR(vector_inner(y, z), 11.0, 1e-13);
  EXPECT_EQ(vector_inner(y, zero), 0.0);
  const std::vector<SampledFunction> y1{c(2)}, z1{c(5)};
  EXPECT_EQ(vector_inner(y1, z1), l2_inner(y1[0], z1[0]));
  EXPECT_THROW(vector_inner(y, y1), StructuralError);
}

TEST(Resample, HandComputedMidpoints) {
  const std::vector<double> v{0.0, 3.0, 6.0, 3.0};
  const auto r = resample_linear(v, 7);
  const std::vector<double> expected{0.0, 1.5, 3.0, 4.5, 6.0, 4.5, 3.0};
  ASSERT_EQ(r.size(), expected.size());
  for (std::size_t a = 0; a < r.size(); ++a) EXPECT_NEAR(r[a], expected[a], 1e-14);
}

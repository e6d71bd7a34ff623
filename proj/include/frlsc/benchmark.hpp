#pragma once

// Functional RLSC against the vectorized baseline on one shared split, both
// tuned with the same hold-out protocol and grids.

#include <cstddef>
#include <cstdint>

#include "frlsc/baseline.hpp"
#include "frlsc/classifier.hpp"
#include "frlsc/data.hpp"

namespace frlsc {

struct BenchmarkOutcome {
  double functional_accuracy = 0.0;
  double baseline_accuracy = 0.0;
  ConfusionMatrix functional;
  ConfusionMatrix baseline;
  TuningResult functional_tuning;
  TuningResult baseline_tuning;
};

inline BenchmarkOutcome run_benchmark(const Dataset& data, double train_fraction, const TuningGrid& grid,
                                      const FunctionalSettings& settings, std::uint64_t seed,
                                      std::size_t workers) {
  const Split parts = split(data, train_fraction, seed);
  BenchmarkOutcome out;
  out.functional_tuning = tune_functional(parts.train, grid, settings, workers);
  const auto model = train_multiclass(parts.train,
                                      RegularizationConfig{out.functional_tuning.lambda, settings.k, settings.tail},
                                      ScalarKernelParams{settings.kernel, out.functional_tuning.sigma},
                                      settings.scheme, workers, settings.op, settings.rule);
  const auto fev = evaluate(model, parts.test, workers);
  out.functional = fev.confusion;
  out.functional_accuracy = fev.accuracy();

  out.baseline_tuning = tune_rlsc(parts.train, grid, workers);
  const auto rlsc = train_rlsc(vectorize(parts.train), out.baseline_tuning.sigma, out.baseline_tuning.lambda, workers);
  const auto bev = evaluate_rlsc(rlsc, vectorize(parts.test), workers);
  out.baseline = bev.confusion;
  out.baseline_accuracy = bev.accuracy();
  return out;
}

}  // namespace frlsc

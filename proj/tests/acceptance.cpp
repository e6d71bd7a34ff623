// Acceptance suite. Prints one line per criterion and exits non-zero if any
// selected criterion fails. Usage: frlsc_acceptance [A1|A2|A3|A4|A5|A6 ...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "frlsc/frlsc.hpp"

using namespace frlsc;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

Outcome a1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto checks = check_oracle_equivalence(3, 31, 2, 20, 1.0, 10, 1);
  double worst = 0.0;
  std::size_t failed = 0;
  for (const auto& c : checks) {
    worst = std::max(worst, c.measured);
    if (!c.passed) ++failed;
  }
  const double secs = seconds_since(t0);
  return {failed == 0 && secs < 10.0,
          "worst relative L2 gap " + sci(worst) + " (bound 1e-3), " + std::to_string(failed) +
              "/10 instances over, " + sci(secs) + " s (bound 10 s)"};
}

Outcome a2() {
  const auto checks = check_operator_spectrum(5, 401, 1e-3, 1e-12);
  double residual = 0.0, root = 0.0;
  bool ok = true;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    ok = ok && checks[i].passed;
    (i % 2 == 0 ? residual : root) = std::max(i % 2 == 0 ? residual : root, checks[i].measured);
  }
  return {ok, "max ||Tw-dw||/d = " + sci(residual) + " (bound 1e-3), max |g(mu)| = " + sci(root) +
                  " (bound 1e-12)"};
}

struct Comparison {
  double functional = 0.0;
  double baseline = 0.0;
  double seconds = 0.0;
};

Comparison compare(bool lag) {
  const auto t0 = std::chrono::steady_clock::now();
  Comparison c;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SynthConfig cfg;
    cfg.n_per_class = 60;
    cfg.classes = 4;
    cfg.channels = 3;
    cfg.m = 64;
    cfg.seed = seed;
    const Dataset data = lag ? synth_lag_dataset(cfg) : synth_iid_dataset(cfg);
    TuningGrid grid;
    grid.seed = seed;
    const auto r = run_benchmark(data, 2.0 / 3.0, grid, FunctionalSettings{}, seed, 0);
    c.functional += r.functional_accuracy / 5.0;
    c.baseline += r.baseline_accuracy / 5.0;
  }
  c.seconds = seconds_since(t0);
  return c;
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

Outcome a3() {
  const auto c = compare(true);
  const double delta = 100.0 * (c.functional - c.baseline);
  return {delta >= 5.0 && c.seconds < 300.0,
          "functional " + percent(c.functional) + " vs baseline " + percent(c.baseline) + ", delta " +
              std::to_string(delta) + " points (need >= 5), " + sci(c.seconds) + " s"};
}

Outcome a5() {
  const auto c = compare(false);
  const double delta = 100.0 * (c.functional - c.baseline);
  return {std::abs(delta) <= 5.0,
          "functional " + percent(c.functional) + " vs baseline " + percent(c.baseline) + ", |delta| " +
              std::to_string(std::abs(delta)) + " points (bound 5)"};
}

Outcome a4() {
  std::vector<std::string> failures;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };
  std::mt19937_64 rng(11);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto inst = random_instance(6, 41, 2, 200 + s);
    expect(negative_eigen_ratio(block_gram(inst)) <= 1e-8, "block Gram PSD");
    expect(reproducing_property_error(inst, 8, 0.1) <= 1e-6, "reproducing property");

    for (int t = 0; t < 5; ++t) {
      const auto f = random_smooth_curve(inst.grid, rng);
      const auto g = random_quadratic(inst.grid, rng);
      const double ip = l2_inner(f, g);
      expect(ip * ip <= l2_norm_sq(f) * l2_norm_sq(g) + 1e-12, "Cauchy-Schwarz");
    }

    auto op = std::make_shared<const OperatorEigen>(operator_eigensystem(8, inst.grid));
    const auto set = prepare_training_set(inst.inputs, inst.params, op);
    const auto c_small = spectral_coefficients(solve_beta(inst.labels, set->spectrum, 0.1), set->spectrum);
    const auto c_large = spectral_coefficients(solve_beta(inst.labels, set->spectrum, 1.0), set->spectrum);
    expect((c_small.array().abs() + 1e-12 >= c_large.array().abs()).all(), "regularization monotonicity");
  }

  SynthConfig cfg;
  cfg.n_per_class = 12;
  cfg.classes = 3;
  cfg.m = 32;
  cfg.seed = 5;
  const Dataset data = synth_lag_dataset(cfg);
  const Split parts = split(data, 2.0 / 3.0, 5);
  const RegularizationConfig reg{0.1, 8, TailPolicy::regularized};
  const ScalarKernelParams params{ScalarKernelKind::gaussian, median_heuristic_sigma(parts.train.observations)};
  for (double gamma : {0.5, 3.0}) {
    LabelScheme scaled;
    scaled.scale = gamma;
    const auto base = train_multiclass(parts.train, reg, params, LabelScheme{}, 1);
    const auto other = train_multiclass(parts.train, reg, params, scaled, 1);
    for (const auto& x : parts.test.observations) {
      expect(classify(base, x).label == classify(other, x).label, "argmax invariance under label rescaling");
    }
  }
  const auto e1 = evaluate(train_multiclass(parts.train, reg, params, LabelScheme{}, 1), parts.test, 1);
  const auto e2 = evaluate(train_multiclass(parts.train, reg, params, LabelScheme{}, 1), parts.test, 1);
  const auto e4 = evaluate(train_multiclass(parts.train, reg, params, LabelScheme{}, 4), parts.test, 4);
  expect(e1.confusion.counts == e2.confusion.counts, "determinism across runs");
  expect(e1.confusion.counts == e4.confusion.counts, "determinism across worker counts");
  for (std::size_t i = 0; i < e1.decisions.size(); ++i) {
    expect(e1.decisions[i].scores == e4.decisions[i].scores, "bitwise scores across worker counts");
  }

  std::set<std::string> unique(failures.begin(), failures.end());
  std::string detail = unique.empty() ? "all invariants hold" : "failed:";
  for (const auto& f : unique) detail += " [" + f + "]";
  return {unique.empty(), detail};
}

Outcome a6() {
  std::vector<std::string> failures;
  const auto dir = std::filesystem::temp_directory_path() / "frlsc_acceptance";
  std::filesystem::create_directories(dir);

  SynthConfig cfg;
  cfg.n_per_class = 8;
  cfg.classes = 3;
  cfg.m = 24;
  cfg.seed = 3;
  const Dataset data = synth_lag_dataset(cfg);
  for (const auto fmt : {DataFormat::csv, DataFormat::json}) {
    const auto path = dir / (fmt == DataFormat::csv ? "data.csv" : "data.json");
    save_dataset(path.string(), data, fmt);
    const auto back = load_dataset(path.string()).data;
    bool same = back.size() == data.size() && back.labels == data.labels && back.ids == data.ids &&
                back.class_names == data.class_names && back.grid == data.grid;
    for (std::size_t i = 0; same && i < data.size(); ++i) same = back.observations[i] == data.observations[i];
    if (!same) failures.push_back(fmt == DataFormat::csv ? "dataset CSV" : "dataset JSON");
  }

  const RegularizationConfig reg{0.1, 8, TailPolicy::regularized};
  const auto model = train_multiclass(data, reg, {ScalarKernelKind::gaussian, 1.0}, LabelScheme{}, 1);
  const auto path = (dir / "model.json").string();
  save_model(path, to_json(model));
  const auto back = load_multiclass_model(path);
  bool same = back.classes == model.classes;
  for (std::size_t c = 0; same && c < model.per_class.size(); ++c) {
    same = back.per_class[c].beta() == model.per_class[c].beta() &&
           back.training_set().spectrum.op->mu == model.training_set().spectrum.op->mu;
  }
  for (const auto& x : data.observations) same = same && classify(back, x).scores == classify(model, x).scores;
  if (!same) failures.push_back("model file");
  std::filesystem::remove_all(dir);

  std::string detail = failures.empty() ? "model JSON, dataset CSV and JSON reproduce bit-for-bit" : "failed:";
  for (const auto& f : failures) detail += " [" + f + "]";
  return {failures.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5}, {"A6", a6}};
  std::set<std::string> wanted(argv + 1, argv + argc);
  bool all_passed = true;
  for (const auto& [name, run] : criteria) {
    if (!wanted.empty() && !wanted.count(name)) continue;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all_passed = all_passed && o.passed;
    std::printf("%s %s  %s\n", name.c_str(), o.passed ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return all_passed ? 0 : 1;
}

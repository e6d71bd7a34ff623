#pragma once

// One-vs-all functional classification with function-valued labels.
//
// Class c's binary model is trained on +y (members of c) and -y (all other
// observations), where y is a scaled Heaviside step or a constant. A new
// observation is scored per class by projecting the predicted curve onto the
// positive label, <f_c(x), y+> / ||y+||^2, and assigned to the highest score
// (ties go to the lowest class index).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "frlsc/data.hpp"
#include "frlsc/errors.hpp"
#include "frlsc/function_space.hpp"
#include "frlsc/integral_operator.hpp"
#include "frlsc/parallel.hpp"
#include "frlsc/scalar_kernel.hpp"
#include "frlsc/solver.hpp"

namespace frlsc {

enum class LabelKind { heaviside, constant };

inline std::string to_string(LabelKind k) { return k == LabelKind::heaviside ? "heaviside" : "constant"; }

inline LabelKind label_kind_from_string(const std::string& s) {
  if (s == "heaviside") return LabelKind::heaviside;
  if (s == "constant") return LabelKind::constant;
  throw ArgumentError("classifier", "unknown label kind '" + s + "'");
}

struct LabelScheme {
  LabelKind kind = LabelKind::heaviside;
  double scale = 1.0;
  double step_at = 0.5;

  void validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
      throw ArgumentError("classifier", "label scale must be positive");
    }
    if (kind == LabelKind::heaviside && !(step_at > 0.0 && step_at < 1.0)) {
      throw ArgumentError("classifier", "Heaviside step must lie in (0, 1)");
    }
  }
};

/// Positive: scale * 1[t >= step_at] (or scale everywhere); negative is its negation.
inline SampledFunction make_label(bool positive, const LabelScheme& scheme, const Grid& grid) {
  scheme.validate();
  const double s = positive ? scheme.scale : -scheme.scale;
  if (scheme.kind == LabelKind::constant) {
    return SampledFunction::from(grid, [s](double) { return s; });
  }
  return SampledFunction::from(grid, [&](double t) { return t >= scheme.step_at ? s : 0.0; });
}

enum class DecisionRule { projection, distance };

inline std::string to_string(DecisionRule r) {
  return r == DecisionRule::projection ? "projection" : "distance";
}

inline DecisionRule decision_rule_from_string(const std::string& s) {
  if (s == "projection") return DecisionRule::projection;
  if (s == "distance") return DecisionRule::distance;
  throw ArgumentError("classifier", "unknown decision rule '" + s + "'");
}

struct Classification {
  int label = 0;
  std::vector<double> scores;
};

/// Index of the largest score; the first one wins ties.
inline std::size_t argmax_lowest(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return best;
}

struct MulticlassModel {
  std::vector<int> classes;
  std::vector<TrainedModel> per_class;
  LabelScheme scheme;
  DecisionRule rule = DecisionRule::projection;

  const TrainingSet& training_set() const { return per_class.front().training_set(); }
  const Grid& grid() const { return per_class.front().grid(); }
};

/// Binary label vector for "is class `cls`".
inline std::vector<SampledFunction> one_vs_all_labels(std::span<const int> labels, int cls,
                                                      const LabelScheme& scheme, const Grid& grid) {
  const SampledFunction pos = make_label(true, scheme, grid);
  const SampledFunction neg = make_label(false, scheme, grid);
  std::vector<SampledFunction> yv;
  yv.reserve(labels.size());
  for (int l : labels) yv.push_back(l == cls ? pos : neg);
  return yv;
}

/// Trains the N binary models against one shared set of spectral factors.
inline MulticlassModel train_multiclass(std::shared_ptr<const TrainingSet> set,
                                        std::span<const int> labels, const RegularizationConfig& config,
                                        const LabelScheme& scheme, std::size_t workers = 1,
                                        DecisionRule rule = DecisionRule::projection) {
  config.validate();
  scheme.validate();
  if (labels.size() != set->inputs.size()) {
    throw StructuralError("classifier", "label count differs from training inputs");
  }
  std::vector<int> classes(labels.begin(), labels.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  if (classes.size() < 2) {
    throw ArgumentError("classifier", "one-vs-all training needs at least 2 classes");
  }
  std::vector<std::optional<TrainedModel>> slots(classes.size());
  parallel_for(classes.size(), workers, [&](std::size_t c) {
    const auto yv = one_vs_all_labels(labels, classes[c], scheme, set->grid);
    slots[c].emplace(fit(set, yv, config.lambda, config.tail));
  });
  MulticlassModel model;
  model.classes = std::move(classes);
  model.scheme = scheme;
  model.rule = rule;
  for (auto& s : slots) model.per_class.push_back(std::move(*s));
  return model;
}

inline std::shared_ptr<const OperatorEigen> make_operator(OperatorKind kind, std::size_t k,
                                                          const Grid& grid) {
  return std::make_shared<const OperatorEigen>(kind == OperatorKind::exponential
                                                   ? operator_eigensystem(k, grid)
                                                   : identity_eigensystem(grid));
}

inline MulticlassModel train_multiclass(const Dataset& data, const RegularizationConfig& config,
                                        const ScalarKernelParams& params, const LabelScheme& scheme,
                                        std::size_t workers = 1,
                                        OperatorKind kind = OperatorKind::exponential,
                                        DecisionRule rule = DecisionRule::projection) {
  config.validate();
  data.validate();
  auto set = prepare_training_set(data.observations, params, make_operator(kind, config.k, data.grid),
                                  workers);
  return train_multiclass(std::move(set), data.labels, config, scheme, workers, rule);
}

/// Scores from the kernel row of x against the training inputs.
inline Classification classify_from_kernel_row(const MulticlassModel& model, const Eigen::VectorXd& row) {
  const SampledFunction pos = make_label(true, model.scheme, model.grid());
  const double pos_norm = l2_norm_sq(pos);
  Classification out;
  out.scores.reserve(model.classes.size());
  for (const auto& binary : model.per_class) {
    const SampledFunction f = predict_from_kernel_row(binary, row);
    out.scores.push_back(model.rule == DecisionRule::projection ? l2_inner(f, pos) / pos_norm
                                                                : -l2_norm_sq(f - pos));
  }
  out.label = model.classes[argmax_lowest(out.scores)];
  return out;
}

inline Classification classify(const MulticlassModel& model, const FunctionalObservation& x) {
  const auto& set = model.training_set();
  require_same_grid(x.grid(), set.grid);
  if (x.channels() != set.inputs.front().channels()) {
    throw StructuralError("classifier", "observation has " + std::to_string(x.channels()) +
                                            " channels, model expects " +
                                            std::to_string(set.inputs.front().channels()));
  }
  return classify_from_kernel_row(model, kernel_row(x, set.inputs, set.params));
}

/// Counts with rows = predicted class and columns = true class.
struct ConfusionMatrix {
  std::vector<int> classes;
  std::vector<std::vector<std::size_t>> counts;

  explicit ConfusionMatrix(std::vector<int> cls = {})
      : classes(std::move(cls)), counts(classes.size(), std::vector<std::size_t>(classes.size(), 0)) {}

  std::size_t index_of(int cls) const {
    const auto it = std::find(classes.begin(), classes.end(), cls);
    if (it == classes.end()) throw ArgumentError("classifier", "unknown class " + std::to_string(cls));
    return static_cast<std::size_t>(it - classes.begin());
  }

  void add(int predicted, int truth) { ++counts[index_of(predicted)][index_of(truth)]; }

  std::vector<std::size_t> column_totals() const {
    std::vector<std::size_t> t(classes.size(), 0);
    for (const auto& row : counts)
      for (std::size_t c = 0; c < row.size(); ++c) t[c] += row[c];
    return t;
  }

  std::size_t total() const {
    std::size_t t = 0;
    for (auto v : column_totals()) t += v;
    return t;
  }

  std::size_t correct() const {
    std::size_t t = 0;
    for (std::size_t c = 0; c < classes.size(); ++c) t += counts[c][c];
    return t;
  }

  double accuracy() const {
    const auto n = total();
    return n == 0 ? 0.0 : static_cast<double>(correct()) / static_cast<double>(n);
  }

  std::string to_csv() const {
    std::ostringstream os;
    os << "predicted\\true";
    for (int c : classes) os << ",C" << c;
    os << "\n";
    for (std::size_t r = 0; r < classes.size(); ++r) {
      os << "C" << classes[r];
      for (auto v : counts[r]) os << "," << v;
      os << "\n";
    }
    return os.str();
  }

  /// Column-normalized percentages, predicted classes down, true classes across.
  std::string to_table(const std::string& title) const {
    std::ostringstream os;
    const auto totals = column_totals();
    os << title << "\n";
    os << std::setw(6) << "";
    for (int c : classes) os << std::setw(9) << ("C" + std::to_string(c));
    os << "\n";
    for (std::size_t r = 0; r < classes.size(); ++r) {
      os << std::setw(6) << ("C" + std::to_string(classes[r]));
      for (std::size_t c = 0; c < classes.size(); ++c) {
        const double pct = totals[c] ? 100.0 * static_cast<double>(counts[r][c]) /
                                           static_cast<double>(totals[c])
                                     : 0.0;
        os << std::setw(9) << std::fixed << std::setprecision(2) << pct;
      }
      os << "\n";
    }
    os << "Total Recognition Rate = " << std::fixed << std::setprecision(2) << 100.0 * accuracy()
       << "%\n";
    return os.str();
  }

  nlohmann::json to_json() const {
    return {{"classes", classes}, {"counts", counts}, {"column_totals", column_totals()},
            {"correct", correct()}, {"total", total()}, {"accuracy", accuracy()}};
  }
};

struct Evaluation {
  ConfusionMatrix confusion;
  std::vector<Classification> decisions;

  double accuracy() const { return confusion.accuracy(); }
};

inline Evaluation evaluate(const MulticlassModel& model, const Dataset& test, std::size_t workers = 1) {
  if (test.size() == 0) throw ArgumentError("classifier", "empty test set");
  std::vector<int> classes = model.classes;
  for (int l : test.classes()) {
    if (std::find(classes.begin(), classes.end(), l) == classes.end()) classes.push_back(l);
  }
  std::sort(classes.begin(), classes.end());
  Evaluation ev{ConfusionMatrix(classes), std::vector<Classification>(test.size())};
  parallel_for(test.size(), workers,
               [&](std::size_t i) { ev.decisions[i] = classify(model, test.observations[i]); });
  for (std::size_t i = 0; i < test.size(); ++i) ev.confusion.add(ev.decisions[i].label, test.labels[i]);
  return ev;
}

/// Validation grid for sigma (as multiples of a base bandwidth) and lambda.
struct TuningGrid {
  std::vector<double> sigma_factors{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> lambdas{1e-3, 1e-2, 1e-1, 1.0, 10.0};
  double validation_fraction = 0.25;
  std::uint64_t seed = 7;
  std::optional<double> sigma_base;  // defaults to the median heuristic

  void validate() const {
    if (sigma_factors.empty() || lambdas.empty()) {
      throw ArgumentError("classifier", "tuning grid is empty");
    }
    for (double s : sigma_factors)
      if (!(s > 0.0)) throw ArgumentError("classifier", "sigma factors must be positive");
    for (double l : lambdas)
      if (!(l > 0.0)) throw ArgumentError("classifier", "lambda grid values must be positive");
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
      throw ArgumentError("classifier", "validation fraction must lie in (0, 1)");
    }
  }
};

struct TuningTrial {
  double sigma = 0.0;
  double lambda = 0.0;
  double accuracy = 0.0;
};

struct TuningResult {
  double sigma = 0.0;
  double lambda = 0.0;
  double validation_accuracy = -1.0;
  std::vector<TuningTrial> trials;

  void consider(const TuningTrial& t) {
    trials.push_back(t);
    if (t.accuracy > validation_accuracy) {
      validation_accuracy = t.accuracy;
      sigma = t.sigma;
      lambda = t.lambda;
    }
  }

  nlohmann::json to_json() const {
    nlohmann::json trials_json = nlohmann::json::array();
    for (const auto& t : trials) {
      trials_json.push_back({{"sigma", t.sigma}, {"lambda", t.lambda}, {"accuracy", t.accuracy}});
    }
    return {{"sigma", sigma}, {"lambda", lambda}, {"validation_accuracy", validation_accuracy},
            {"trials", trials_json}};
  }
};

struct FunctionalSettings {
  std::size_t k = 8;
  TailPolicy tail = TailPolicy::regularized;
  ScalarKernelKind kernel = ScalarKernelKind::gaussian;
  OperatorKind op = OperatorKind::exponential;
  LabelScheme scheme;
  DecisionRule rule = DecisionRule::projection;
};

/// Picks (sigma, lambda) by accuracy on a stratified hold-out of `train`.
/// The first best grid point in (sigma, lambda) order wins.
inline TuningResult tune_functional(const Dataset& train, const TuningGrid& grid,
                                    const FunctionalSettings& settings, std::size_t workers = 1) {
  grid.validate();
  const Split parts = split(train, 1.0 - grid.validation_fraction, grid.seed);
  const double base = grid.sigma_base.value_or(median_heuristic_sigma(parts.train.observations));
  const auto op = make_operator(settings.op, settings.k, train.grid);
  TuningResult result;
  for (double factor : grid.sigma_factors) {
    const ScalarKernelParams params{settings.kernel, factor * base};
    auto set = prepare_training_set(parts.train.observations, params, op, workers);
    std::vector<Eigen::VectorXd> rows(parts.test.size());
    parallel_for(parts.test.size(), workers, [&](std::size_t i) {
      rows[i] = kernel_row(parts.test.observations[i], set->inputs, params);
    });
    for (double lambda : grid.lambdas) {
      const RegularizationConfig config{lambda, settings.k, settings.tail};
      const auto model = train_multiclass(set, parts.train.labels, config, settings.scheme, workers,
                                          settings.rule);
      std::size_t correct = 0;
      for (std::size_t i = 0; i < parts.test.size(); ++i) {
        if (classify_from_kernel_row(model, rows[i]).label == parts.test.labels[i]) ++correct;
      }
      result.consider({params.sigma, lambda,
                       static_cast<double>(correct) / static_cast<double>(parts.test.size())});
    }
  }
  return result;
}

}  // namespace frlsc

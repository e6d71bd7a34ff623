#pragma once

// Command-line front end: synth, train, predict, evaluate, benchmark, verify.
//
// Every option is global so a flat "key = value" file given with --config can
// set any of them; command-line flags override the file. Each verb writes a
// human-readable .txt report and a machine-readable .json report into
// --out-dir.
//
// Exit codes: 0 success, 1 a verification check failed, 2 invalid
// configuration, 3 data or model file error, 4 numerical failure.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "frlsc/frlsc.hpp"

namespace frlsc::cli {

enum ExitCode : int { ok = 0, check_failed = 1, config_error = 2, data_error = 3, numeric_error = 4 };

/// Raw option text as given on the command line or in the config file.
struct RawOptions {
  std::string data, test_data, model, out_dir = "frlsc-out", out, format = "auto";
  std::string sigma, lambda, k = "8", kernel = "gaussian", op = "exponential", tail = "regularized";
  std::string label = "heaviside", scale = "1", step_at = "0.5", rule = "projection";
  std::string sigma_factors = "0.25,0.5,1,2,4", lambdas = "0.001,0.01,0.1,1,10";
  std::string train_fraction = "0.6666666666666666", validation_fraction = "0.25";
  std::string seed = "1", workers = "0";
  std::string synth_kind = "lag", n_per_class = "60", classes = "4", channels = "3", m = "64",
              noise = "0.5";
  std::string verify_n = "3", verify_m = "31", verify_p = "2", verify_k = "20", verify_lambda = "1",
              verify_instances = "10", spectrum_m = "401", spectrum_k = "5";
};

/// Validated run configuration.
struct RunConfig {
  std::string command;
  std::string data, test_data, model, out_dir, out;
  std::optional<DataFormat> format;
  std::optional<double> sigma, lambda;
  std::size_t k = 8;
  ScalarKernelKind kernel = ScalarKernelKind::gaussian;
  OperatorKind op = OperatorKind::exponential;
  TailPolicy tail = TailPolicy::regularized;
  LabelScheme scheme;
  DecisionRule rule = DecisionRule::projection;
  std::vector<double> sigma_factors, lambdas;
  double train_fraction = 2.0 / 3.0;
  double validation_fraction = 0.25;
  std::uint64_t seed = 1;
  std::size_t workers = 0;
  std::string synth_kind = "lag";
  SynthConfig synth;
  std::size_t verify_n = 3, verify_m = 31, verify_p = 2, verify_k = 20, verify_instances = 10;
  std::size_t spectrum_m = 401, spectrum_k = 5;
  double verify_lambda = 1.0;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["data"] = data;
    j["test_data"] = test_data;
    j["model"] = model;
    j["sigma"] = sigma ? nlohmann::json(*sigma) : nlohmann::json();
    j["lambda"] = lambda ? nlohmann::json(*lambda) : nlohmann::json();
    j["k"] = k;
    j["kernel"] = to_string(kernel);
    j["operator"] = to_string(op);
    j["tail"] = to_string(tail);
    j["label"] = {{"kind", to_string(scheme.kind)}, {"scale", scheme.scale}, {"step_at", scheme.step_at}};
    j["rule"] = to_string(rule);
    j["sigma_factors"] = sigma_factors;
    j["lambdas"] = lambdas;
    j["train_fraction"] = train_fraction;
    j["validation_fraction"] = validation_fraction;
    j["seed"] = seed;
    return j;
  }
};

namespace detail {

class Validator {
 public:
  template <typename T, typename Parse>
  void field(const std::string& path, const std::string& text, T& out, Parse&& parse) {
    try {
      out = parse(text);
    } catch (const std::exception& e) {
      errors_.push_back(path + ": " + e.what());
    }
  }

  void require(bool cond, const std::string& path, const std::string& msg) {
    if (!cond) errors_.push_back(path + ": " + msg);
  }

  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

inline double parse_real(const std::string& s) {
  double v;
  if (!frlsc::detail::parse_double(s, v)) throw std::invalid_argument("'" + s + "' is not a finite number");
  return v;
}

inline double parse_positive(const std::string& s) {
  const double v = parse_real(s);
  if (!(v > 0.0)) throw std::invalid_argument("must be positive, got " + s);
  return v;
}

inline std::size_t parse_count(const std::string& s, std::size_t min) {
  long long v;
  if (!frlsc::detail::parse_int(s, v) || v < static_cast<long long>(min)) {
    throw std::invalid_argument("'" + s + "' is not an integer >= " + std::to_string(min));
  }
  return static_cast<std::size_t>(v);
}

inline std::vector<double> parse_positive_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : frlsc::detail::split_csv_line(s)) out.push_back(parse_positive(item));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

inline double parse_open_unit(const std::string& s) {
  const double v = parse_real(s);
  if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument("must lie in (0, 1), got " + s);
  return v;
}

}  // namespace detail

/// Checks every field and reports all problems together.
inline RunConfig validate(const std::string& command, const RawOptions& raw,
                          std::vector<std::string>& errors) {
  using namespace detail;
  Validator v;
  RunConfig c;
  c.command = command;
  c.data = raw.data;
  c.test_data = raw.test_data;
  c.model = raw.model;
  c.out_dir = raw.out_dir;
  c.out = raw.out;
  if (raw.format != "auto") {
    v.field("format", raw.format, c.format, [](const std::string& s) -> std::optional<DataFormat> {
      if (s == "csv") return DataFormat::csv;
      if (s == "json") return DataFormat::json;
      throw std::invalid_argument("expected auto, csv or json");
    });
  }
  if (!raw.sigma.empty()) v.field("sigma", raw.sigma, c.sigma, [](auto& s) { return std::optional(parse_positive(s)); });
  if (!raw.lambda.empty()) v.field("lambda", raw.lambda, c.lambda, [](auto& s) { return std::optional(parse_positive(s)); });
  v.field("k", raw.k, c.k, [](auto& s) { return parse_count(s, 1); });
  v.field("kernel", raw.kernel, c.kernel, [](auto& s) { return scalar_kernel_kind_from_string(s); });
  v.field("operator", raw.op, c.op, [](auto& s) { return operator_kind_from_string(s); });
  v.field("tail", raw.tail, c.tail, [](auto& s) { return tail_policy_from_string(s); });
  v.field("label", raw.label, c.scheme.kind, [](auto& s) { return label_kind_from_string(s); });
  v.field("scale", raw.scale, c.scheme.scale, parse_positive);
  v.field("step-at", raw.step_at, c.scheme.step_at, parse_open_unit);
  v.field("rule", raw.rule, c.rule, [](auto& s) { return decision_rule_from_string(s); });
  v.field("sigma-factors", raw.sigma_factors, c.sigma_factors, parse_positive_list);
  v.field("lambdas", raw.lambdas, c.lambdas, parse_positive_list);
  v.field("train-fraction", raw.train_fraction, c.train_fraction, parse_open_unit);
  v.field("validation-fraction", raw.validation_fraction, c.validation_fraction, parse_open_unit);
  v.field("seed", raw.seed, c.seed, [](auto& s) { return static_cast<std::uint64_t>(parse_count(s, 0)); });
  v.field("workers", raw.workers, c.workers, [](auto& s) { return parse_count(s, 0); });

  v.require(raw.synth_kind == "lag" || raw.synth_kind == "iid", "synth-kind", "expected lag or iid");
  c.synth_kind = raw.synth_kind;
  v.field("n-per-class", raw.n_per_class, c.synth.n_per_class, [](auto& s) { return parse_count(s, 1); });
  v.field("classes", raw.classes, c.synth.classes, [](auto& s) { return parse_count(s, 1); });
  v.field("channels", raw.channels, c.synth.channels, [](auto& s) { return parse_count(s, 1); });
  v.field("m", raw.m, c.synth.m, [](auto& s) { return parse_count(s, 2); });
  v.field("noise", raw.noise, c.synth.noise_sd, [](auto& s) {
    const double x = parse_real(s);
    if (x < 0.0) throw std::invalid_argument("must be non-negative");
    return x;
  });
  c.synth.seed = c.seed;

  v.field("verify-n", raw.verify_n, c.verify_n, [](auto& s) { return parse_count(s, 1); });
  v.field("verify-m", raw.verify_m, c.verify_m, [](auto& s) { return parse_count(s, 2); });
  v.field("verify-p", raw.verify_p, c.verify_p, [](auto& s) { return parse_count(s, 1); });
  v.field("verify-k", raw.verify_k, c.verify_k, [](auto& s) { return parse_count(s, 1); });
  v.field("verify-lambda", raw.verify_lambda, c.verify_lambda, parse_positive);
  v.field("verify-instances", raw.verify_instances, c.verify_instances, [](auto& s) { return parse_count(s, 1); });
  v.field("spectrum-m", raw.spectrum_m, c.spectrum_m, [](auto& s) { return parse_count(s, 2); });
  v.field("spectrum-k", raw.spectrum_k, c.spectrum_k, [](auto& s) { return parse_count(s, 1); });

  const bool needs_data = command == "train" || command == "predict" || command == "evaluate";
  v.require(!needs_data || !c.data.empty(), "data", "required by '" + command + "'");
  const bool needs_model = command == "predict" || command == "evaluate";
  v.require(!needs_model || !c.model.empty(), "model", "required by '" + command + "'");
  v.require(command != "synth" || !c.out.empty(), "out", "required by 'synth'");
  if (command == "verify") {
    v.require(c.verify_n * c.verify_m <= brute_force_limit, "verify-n",
              "verify-n * verify-m exceeds " + std::to_string(brute_force_limit));
  }
  if (command == "synth" && !c.out.empty()) {
    try {
      c.format = c.format.value_or(data_format_from_path(c.out));
    } catch (const std::exception& e) {
      v.require(false, "out", e.what());
    }
  }
  errors = v.errors();
  return c;
}

namespace detail {

inline void write_reports(const RunConfig& cfg, const std::string& stem, const std::string& text,
                          nlohmann::json json) {
  std::filesystem::create_directories(cfg.out_dir);
  const auto base = std::filesystem::path(cfg.out_dir) / stem;
  std::ofstream(base.string() + ".txt") << text;
  json["config"] = cfg.to_json();
  std::ofstream(base.string() + ".json") << json.dump(2) << "\n";
}

inline Dataset load(const RunConfig& cfg, const std::string& path, std::ostream& log) {
  const auto result = cfg.format ? load_dataset(path, *cfg.format) : load_dataset(path);
  if (result.resampled > 0) {
    log << "warning: " << result.resampled << " curve(s) in '" << path
        << "' resampled to m=" << result.data.grid.size() << "\n";
  }
  return result.data;
}

inline TuningGrid tuning_grid(const RunConfig& cfg) {
  TuningGrid g;
  g.sigma_factors = cfg.sigma ? std::vector<double>{1.0} : cfg.sigma_factors;
  g.sigma_base = cfg.sigma;
  g.lambdas = cfg.lambda ? std::vector<double>{*cfg.lambda} : cfg.lambdas;
  g.validation_fraction = cfg.validation_fraction;
  g.seed = cfg.seed;
  return g;
}

inline FunctionalSettings functional_settings(const RunConfig& cfg) {
  return {cfg.k, cfg.tail, cfg.kernel, cfg.op, cfg.scheme, cfg.rule};
}

inline std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

}  // namespace detail

inline int cmd_synth(const RunConfig& cfg, std::ostream& out) {
  const Dataset data = cfg.synth_kind == "lag" ? synth_lag_dataset(cfg.synth) : synth_iid_dataset(cfg.synth);
  save_dataset(cfg.out, data, *cfg.format);
  std::ostringstream text;
  text << "synthetic '" << cfg.synth_kind << "' data set: " << data.size() << " observations, "
       << cfg.synth.classes << " classes, p=" << cfg.synth.channels << ", m=" << cfg.synth.m
       << ", noise=" << cfg.synth.noise_sd << ", seed=" << cfg.seed << "\nwritten to " << cfg.out << "\n";
  out << text.str();
  detail::write_reports(cfg, "synth_report", text.str(),
                        {{"observations", data.size()}, {"path", cfg.out}});
  return ok;
}

inline int cmd_train(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const Dataset data = detail::load(cfg, cfg.data, log);
  nlohmann::json report;
  double sigma = cfg.sigma.value_or(0.0);
  double lambda = cfg.lambda.value_or(0.0);
  std::optional<TuningResult> tuning;
  if (!cfg.sigma || !cfg.lambda) {
    tuning = tune_functional(data, detail::tuning_grid(cfg), detail::functional_settings(cfg), cfg.workers);
    sigma = tuning->sigma;
    lambda = tuning->lambda;
    report["tuning"] = tuning->to_json();
  }
  const RegularizationConfig reg{lambda, cfg.k, cfg.tail};
  const ScalarKernelParams params{cfg.kernel, sigma};
  const auto model = train_multiclass(data, reg, params, cfg.scheme, cfg.workers, cfg.op, cfg.rule);
  std::filesystem::create_directories(cfg.out_dir);
  const std::string model_path =
      cfg.model.empty() ? (std::filesystem::path(cfg.out_dir) / "model.json").string() : cfg.model;
  save_model(model_path, to_json(model));

  const auto& spectrum = model.training_set().spectrum;
  const auto& op = *spectrum.op;
  const SampledFunction pos = make_label(true, cfg.scheme, data.grid);
  const std::vector<SampledFunction> label_only{pos};
  const double discarded = discarded_energy_ratio(label_only, op);
  const double tail_bound = truncation_tail_bound(spectrum, lambda);
  const double train_acc = evaluate(model, data, cfg.workers).accuracy();

  std::ostringstream text;
  text << "functional RLSC model: n=" << data.size() << ", p=" << data.channels()
       << ", m=" << data.grid.size() << ", classes=" << model.classes.size() << "\n";
  text << "sigma = " << detail::fmt(sigma) << ", lambda = " << detail::fmt(lambda) << ", k = " << op.k()
       << ", operator = " << to_string(op.kind) << ", tail = " << to_string(cfg.tail) << "\n";
  if (tuning) {
    text << "chosen by validation grid search: sigma = " << detail::fmt(sigma) << ", lambda = "
         << detail::fmt(lambda) << " (validation accuracy " << detail::fmt(100 * tuning->validation_accuracy, 4)
         << "%)\n";
  }
  text << "Gram eigenvalues: max " << detail::fmt(spectrum.gram.alpha.maxCoeff()) << ", min "
       << detail::fmt(spectrum.gram.alpha.minCoeff()) << "\n";
  text << "operator eigenvalues:\n";
  for (std::size_t j = 0; j < op.k(); ++j) {
    text << "  " << std::setw(3) << j + 1 << "  delta = " << std::setw(12) << detail::fmt(op.delta[j], 8);
    if (!op.mu.empty()) text << "  mu = " << detail::fmt(static_cast<double>(op.mu[j]), 12);
    text << "\n";
  }
  text << "discarded label energy ratio = " << detail::fmt(discarded) << "\n";
  text << "truncation tail bound alpha_max*delta_(k+1)/lambda = " << detail::fmt(tail_bound) << "\n";
  text << "training accuracy = " << detail::fmt(100 * train_acc, 4) << "%\n";
  text << "model written to " << model_path << "\n";
  out << text.str();

  report["model_path"] = model_path;
  report["sigma"] = sigma;
  report["lambda"] = lambda;
  report["k"] = op.k();
  report["alpha_max"] = spectrum.gram.alpha.maxCoeff();
  report["alpha_min"] = spectrum.gram.alpha.minCoeff();
  report["delta"] = op.delta;
  report["discarded_energy_ratio"] = discarded;
  report["tail_bound"] = tail_bound;
  report["training_accuracy"] = train_acc;
  detail::write_reports(cfg, "train_report", text.str(), report);
  return ok;
}

inline int cmd_predict(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const auto model = load_multiclass_model(cfg.model, cfg.workers);
  const Dataset data = detail::load(cfg, cfg.data, log);
  std::vector<Classification> decisions(data.size());
  parallel_for(data.size(), cfg.workers, [&](std::size_t i) { decisions[i] = classify(model, data.observations[i]); });
  std::ostringstream csv;
  csv << "id,predicted";
  for (int c : model.classes) csv << ",score_C" << c;
  csv << "\n";
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < data.size(); ++i) {
    csv << data.id_of(i) << "," << decisions[i].label;
    for (double s : decisions[i].scores) csv << "," << frlsc::detail::format_double(s);
    csv << "\n";
    rows.push_back({{"id", data.id_of(i)}, {"predicted", decisions[i].label}, {"scores", decisions[i].scores}});
  }
  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream(std::filesystem::path(cfg.out_dir) / "predictions.csv") << csv.str();
  out << csv.str();
  detail::write_reports(cfg, "predict_report", csv.str(), {{"predictions", rows}});
  return ok;
}

inline int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const auto model = load_multiclass_model(cfg.model, cfg.workers);
  const Dataset data = detail::load(cfg, cfg.data, log);
  const auto ev = evaluate(model, data, cfg.workers);
  const std::string table = ev.confusion.to_table("Functional RLSC confusion matrix (% of true class)");
  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream(std::filesystem::path(cfg.out_dir) / "confusion.csv") << ev.confusion.to_csv();
  out << table;
  detail::write_reports(cfg, "evaluate_report", table, {{"confusion", ev.confusion.to_json()}});
  return ok;
}

inline int cmd_benchmark(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  Dataset data;
  if (!cfg.data.empty()) {
    data = detail::load(cfg, cfg.data, log);
  } else {
    data = cfg.synth_kind == "lag" ? synth_lag_dataset(cfg.synth) : synth_iid_dataset(cfg.synth);
  }
  const auto r = run_benchmark(data, cfg.train_fraction, detail::tuning_grid(cfg),
                               detail::functional_settings(cfg), cfg.seed, cfg.workers);
  std::ostringstream text;
  text << r.functional.to_table("Functional RLSC (sigma = " + detail::fmt(r.functional_tuning.sigma) +
                                ", lambda = " + detail::fmt(r.functional_tuning.lambda) + ")");
  text << "\n";
  text << r.baseline.to_table("baseline RLSC (sigma = " + detail::fmt(r.baseline_tuning.sigma) +
                              ", lambda = " + detail::fmt(r.baseline_tuning.lambda) + ")");
  const double delta = 100.0 * (r.functional_accuracy - r.baseline_accuracy);
  text << "\naccuracy delta (functional - baseline) = " << std::fixed << std::setprecision(2) << delta
       << " points\n";
  out << text.str();
  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream(std::filesystem::path(cfg.out_dir) / "functional_confusion.csv") << r.functional.to_csv();
  std::ofstream(std::filesystem::path(cfg.out_dir) / "baseline_confusion.csv") << r.baseline.to_csv();
  nlohmann::json report;
  report["functional"] = {{"confusion", r.functional.to_json()}, {"tuning", r.functional_tuning.to_json()}};
  report["baseline"] = {{"confusion", r.baseline.to_json()}, {"tuning", r.baseline_tuning.to_json()}};
  report["accuracy_delta_points"] = delta;
  detail::write_reports(cfg, "benchmark_report", text.str(), report);
  return ok;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.model.empty()) {
    const auto doc = read_model_document(cfg.model);
    if (doc.value("kind", std::string()) == "binary") {
      binary_model_from_json(doc);
    } else {
      multiclass_model_from_json(doc);
    }
  }
  std::vector<CheckResult> checks = check_oracle_equivalence(
      cfg.verify_n, cfg.verify_m, cfg.verify_p, cfg.verify_k, cfg.verify_lambda, cfg.verify_instances, cfg.seed);
  for (auto& c : check_operator_spectrum(cfg.spectrum_k, cfg.spectrum_m)) checks.push_back(c);
  for (std::size_t s = 0; s < 3; ++s) {
    const auto inst = random_instance(8, 41, 2, cfg.seed + 100 + s);
    checks.push_back(make_check("Gram PSD, instance " + std::to_string(s),
                                negative_eigen_ratio(gram_matrix(inst.inputs, inst.params)), 1e-8));
    checks.push_back(make_check("block Gram PSD, instance " + std::to_string(s),
                                negative_eigen_ratio(block_gram(inst)), 1e-8));
    checks.push_back(make_check("reproducing property, instance " + std::to_string(s),
                                reproducing_property_error(inst, 8, 0.1), 1e-6));
  }
  std::ostringstream text;
  bool all = true;
  text << std::left << std::setw(48) << "check" << std::right << std::setw(14) << "measured" << std::setw(12)
       << "bound" << "  status\n";
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) {
    all = all && c.passed;
    text << std::left << std::setw(48) << c.name << std::right << std::setw(14) << std::scientific
         << std::setprecision(3) << c.measured << std::setw(12) << c.bound << "  "
         << (c.passed ? "ok" : "FAIL") << "\n";
    arr.push_back(c.to_json());
  }
  text << (all ? "all checks passed\n" : "some checks FAILED\n");
  out << text.str();
  detail::write_reports(cfg, "verify_report", text.str(), {{"checks", arr}, {"passed", all}});
  return all ? ok : check_failed;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Functional regularized least squares classification with operator-valued kernels"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_config("--config", "", "flat key = value file; flags given on the command line win");
  RawOptions raw;
  app.add_option("--data", raw.data, "data set (.csv or .json)");
  app.add_option("--test-data", raw.test_data, "held-out data set");
  app.add_option("--model", raw.model, "model file (frlsc-model/1)");
  app.add_option("--out-dir", raw.out_dir, "directory for reports")->capture_default_str();
  app.add_option("--out", raw.out, "output data file for synth");
  app.add_option("--format", raw.format, "data format: auto, csv, json")->capture_default_str();
  app.add_option("--sigma", raw.sigma, "kernel bandwidth (omit to tune)");
  app.add_option("--lambda", raw.lambda, "regularization (omit to tune)");
  app.add_option("--k", raw.k, "operator truncation level")->capture_default_str();
  app.add_option("--kernel", raw.kernel, "scalar kernel: gaussian, laplacian-l2")->capture_default_str();
  app.add_option("--operator", raw.op, "output operator: exponential, identity")->capture_default_str();
  app.add_option("--tail", raw.tail, "truncation tail: regularized, discard")->capture_default_str();
  app.add_option("--label", raw.label, "label functions: heaviside, constant")->capture_default_str();
  app.add_option("--scale", raw.scale, "label scale")->capture_default_str();
  app.add_option("--step-at", raw.step_at, "Heaviside step location")->capture_default_str();
  app.add_option("--rule", raw.rule, "decision rule: projection, distance")->capture_default_str();
  app.add_option("--sigma-factors", raw.sigma_factors, "bandwidth grid, multiples of the median heuristic")
      ->capture_default_str();
  app.add_option("--lambdas", raw.lambdas, "lambda grid")->capture_default_str();
  app.add_option("--train-fraction", raw.train_fraction, "benchmark train share")->capture_default_str();
  app.add_option("--validation-fraction", raw.validation_fraction, "tuning hold-out share")->capture_default_str();
  app.add_option("--seed", raw.seed, "seed for every random choice")->capture_default_str();
  app.add_option("--workers", raw.workers, "worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--synth-kind", raw.synth_kind, "synthetic data: lag, iid")->capture_default_str();
  app.add_option("--n-per-class", raw.n_per_class)->capture_default_str();
  app.add_option("--classes", raw.classes)->capture_default_str();
  app.add_option("--channels", raw.channels)->capture_default_str();
  app.add_option("--m", raw.m, "synthetic grid size")->capture_default_str();
  app.add_option("--noise", raw.noise, "synthetic noise sd")->capture_default_str();
  app.add_option("--verify-n", raw.verify_n)->capture_default_str();
  app.add_option("--verify-m", raw.verify_m)->capture_default_str();
  app.add_option("--verify-p", raw.verify_p)->capture_default_str();
  app.add_option("--verify-k", raw.verify_k)->capture_default_str();
  app.add_option("--verify-lambda", raw.verify_lambda)->capture_default_str();
  app.add_option("--verify-instances", raw.verify_instances)->capture_default_str();
  app.add_option("--spectrum-m", raw.spectrum_m)->capture_default_str();
  app.add_option("--spectrum-k", raw.spectrum_k)->capture_default_str();

  app.add_subcommand("synth", "generate a synthetic data set");
  app.add_subcommand("train", "train a one-vs-all functional model");
  app.add_subcommand("predict", "classify a data set with a saved model");
  app.add_subcommand("evaluate", "confusion matrix of a saved model on labeled data");
  app.add_subcommand("benchmark", "functional vs baseline RLSC on one split");
  app.add_subcommand("verify", "numerical self-checks against dense oracles");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return config_error;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  std::vector<std::string> errors;
  const RunConfig cfg = validate(command, raw, errors);
  if (!errors.empty()) {
    err << "invalid configuration (" << errors.size() << " problem" << (errors.size() > 1 ? "s" : "") << "):\n";
    for (const auto& e : errors) err << "  " << e << "\n";
    return config_error;
  }

  try {
    if (command == "synth") return cmd_synth(cfg, out);
    if (command == "train") return cmd_train(cfg, out, err);
    if (command == "predict") return cmd_predict(cfg, out, err);
    if (command == "evaluate") return cmd_evaluate(cfg, out, err);
    if (command == "benchmark") return cmd_benchmark(cfg, out, err);
    return cmd_verify(cfg, out);
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return data_error;
  } catch (const StructuralError& e) {
    err << "error: " << e.what() << "\n";
    return data_error;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << "\n";
    return numeric_error;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return e.module() == "data" ? data_error : config_error;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error [cli]: " << e.what() << "\n";
    return data_error;
  }
}

}  // namespace frlsc::cli

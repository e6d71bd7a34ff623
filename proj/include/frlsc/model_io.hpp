#pragma once

// "frlsc-model/1" JSON documents for binary and one-vs-all models.
//
// A document stores the grid size, kernel parameters, lambda, tail policy,
// the operator table (roots as 21-digit decimal strings so extended precision
// survives, eigenvalues as doubles), the training inputs and the beta
// functions. Loading rebuilds the Gram factors from the stored inputs and
// cross-checks every stored eigenvalue against its root.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "frlsc/classifier.hpp"
#include "frlsc/errors.hpp"
#include "frlsc/solver.hpp"

namespace frlsc {

inline constexpr const char* model_format_tag = "frlsc-model/1";

namespace detail {

inline std::string format_long_double(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.21Lg", v);
  return buf;
}

inline nlohmann::json functions_to_json(const std::vector<SampledFunction>& fs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : fs) arr.push_back(std::vector<double>(f.values().begin(), f.values().end()));
  return arr;
}

inline std::vector<SampledFunction> functions_from_json(const nlohmann::json& arr, const Grid& grid) {
  if (!arr.is_array()) throw FormatError("model", "expected an array of functions");
  std::vector<SampledFunction> out;
  for (const auto& f : arr) {
    auto v = f.get<std::vector<double>>();
    if (v.size() != grid.size()) {
      throw FormatError("model", "function with " + std::to_string(v.size()) +
                                     " samples on a grid of " + std::to_string(grid.size()));
    }
    out.emplace_back(grid, std::move(v));
  }
  return out;
}

inline nlohmann::json common_to_json(const TrainedModel& model) {
  const auto& set = model.training_set();
  const auto& op = model.op();
  nlohmann::json doc;
  doc["format"] = model_format_tag;
  doc["grid"] = {{"m", set.grid.size()}};
  doc["kernel"] = {{"kind", to_string(set.params.kind)}, {"sigma", set.params.sigma}};
  nlohmann::json opj;
  opj["kind"] = to_string(op.kind);
  opj["k"] = op.k();
  if (op.kind == OperatorKind::exponential) {
    std::vector<std::string> mu;
    for (long double r : op.mu) mu.push_back(format_long_double(r));
    opj["mu"] = mu;
    opj["delta"] = op.delta;
    opj["next_delta"] = op.next_delta;
  }
  doc["operator"] = opj;
  doc["lambda"] = model.lambda();
  doc["tail"] = to_string(model.tail());
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& x : set.inputs) {
    nlohmann::json chans = nlohmann::json::array();
    for (const auto& c : x.channel_list()) chans.push_back(std::vector<double>(c.values().begin(), c.values().end()));
    inputs.push_back(std::move(chans));
  }
  doc["train_inputs"] = std::move(inputs);
  return doc;
}

struct CommonParts {
  std::shared_ptr<const TrainingSet> set;
  double lambda = 0.0;
  TailPolicy tail = TailPolicy::regularized;
};

inline CommonParts common_from_json(const nlohmann::json& doc, std::size_t workers) {
  if (!doc.is_object() || doc.value("format", std::string()) != model_format_tag) {
    throw FormatError("model", std::string("missing or unknown format tag (expected ") +
                                   model_format_tag + ")");
  }
  const Grid grid(doc.at("grid").at("m").get<std::size_t>());
  ScalarKernelParams params{scalar_kernel_kind_from_string(doc.at("kernel").at("kind").get<std::string>()),
                            doc.at("kernel").at("sigma").get<double>()};
  params.validate();

  const auto& opj = doc.at("operator");
  const OperatorKind kind = operator_kind_from_string(opj.at("kind").get<std::string>());
  std::shared_ptr<const OperatorEigen> op;
  if (kind == OperatorKind::exponential) {
    std::vector<long double> mu;
    for (const auto& s : opj.at("mu")) {
      const std::string text = s.get<std::string>();
      char* end = nullptr;
      const long double v = std::strtold(text.c_str(), &end);
      if (end == text.c_str() || *end != '\0' || !(v > 0.0L)) {
        throw FormatError("model", "bad operator root '" + text + "'");
      }
      mu.push_back(v);
    }
    const auto delta = opj.at("delta").get<std::vector<double>>();
    if (mu.empty() || mu.size() != delta.size() || opj.at("k").get<std::size_t>() != mu.size()) {
      throw FormatError("model", "operator table sizes disagree");
    }
    auto eig = operator_eigensystem_from_roots(std::move(mu), grid, opj.at("next_delta").get<double>());
    for (std::size_t j = 0; j < delta.size(); ++j) {
      if (std::abs(eig.delta[j] - delta[j]) > 1e-14 * eig.delta[j]) {
        throw FormatError("model", "operator eigenvalue " + std::to_string(j) +
                                       " does not match its root");
      }
    }
    op = std::make_shared<const OperatorEigen>(std::move(eig));
  } else {
    op = std::make_shared<const OperatorEigen>(identity_eigensystem(grid));
  }

  std::vector<FunctionalObservation> inputs;
  for (const auto& x : doc.at("train_inputs")) {
    inputs.emplace_back(functions_from_json(x, grid));
  }
  CommonParts parts;
  parts.lambda = doc.at("lambda").get<double>();
  parts.tail = tail_policy_from_string(doc.at("tail").get<std::string>());
  parts.set = prepare_training_set(std::move(inputs), params, std::move(op), workers);
  return parts;
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("model", std::string("malformed model document: ") + e.what());
  } catch (const StructuralError& e) {
    throw FormatError("model", std::string("inconsistent model document: ") + e.what());
  } catch (const ArgumentError& e) {
    throw FormatError("model", std::string("invalid model document: ") + e.what());
  }
}

}  // namespace detail

inline nlohmann::json to_json(const TrainedModel& model) {
  auto doc = detail::common_to_json(model);
  doc["kind"] = "binary";
  doc["beta"] = detail::functions_to_json(model.beta());
  return doc;
}

inline nlohmann::json to_json(const MulticlassModel& model) {
  auto doc = detail::common_to_json(model.per_class.front());
  doc["kind"] = "multiclass";
  doc["classes"] = model.classes;
  doc["label"] = {{"kind", to_string(model.scheme.kind)},
                  {"scale", model.scheme.scale},
                  {"step_at", model.scheme.step_at}};
  doc["decision_rule"] = to_string(model.rule);
  nlohmann::json betas = nlohmann::json::array();
  for (const auto& m : model.per_class) betas.push_back(detail::functions_to_json(m.beta()));
  doc["beta"] = std::move(betas);
  return doc;
}

inline TrainedModel binary_model_from_json(const nlohmann::json& doc, std::size_t workers = 1) {
  return detail::guarded([&] {
    if (doc.value("kind", std::string()) != "binary") throw FormatError("model", "not a binary model");
    auto parts = detail::common_from_json(doc, workers);
    auto beta = detail::functions_from_json(doc.at("beta"), parts.set->grid);
    return TrainedModel(parts.set, std::move(beta), parts.lambda, parts.tail);
  });
}

inline MulticlassModel multiclass_model_from_json(const nlohmann::json& doc, std::size_t workers = 1) {
  return detail::guarded([&] {
    if (doc.value("kind", std::string()) != "multiclass") {
      throw FormatError("model", "not a multiclass model");
    }
    auto parts = detail::common_from_json(doc, workers);
    MulticlassModel model;
    model.classes = doc.at("classes").get<std::vector<int>>();
    const auto& label = doc.at("label");
    model.scheme = {label_kind_from_string(label.at("kind").get<std::string>()),
                    label.at("scale").get<double>(), label.at("step_at").get<double>()};
    model.scheme.validate();
    model.rule = decision_rule_from_string(doc.at("decision_rule").get<std::string>());
    const auto& betas = doc.at("beta");
    if (!betas.is_array() || betas.size() != model.classes.size() || model.classes.size() < 2) {
      throw FormatError("model", "beta table does not match the class list");
    }
    for (const auto& b : betas) {
      model.per_class.emplace_back(parts.set, detail::functions_from_json(b, parts.set->grid),
                                   parts.lambda, parts.tail);
    }
    return model;
  });
}

inline void save_model(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw FormatError("model", "cannot write '" + path + "'");
  out << doc.dump(1) << "\n";
}

inline nlohmann::json read_model_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("model", "cannot open '" + path + "'");
  try {
    nlohmann::json doc;
    in >> doc;
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("model", "'" + path + "' is not a valid model document: " + e.what());
  }
}

inline MulticlassModel load_multiclass_model(const std::string& path, std::size_t workers = 1) {
  return multiclass_model_from_json(read_model_document(path), workers);
}

}  // namespace frlsc

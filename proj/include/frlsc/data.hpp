#pragma once

// Labeled functional data sets: CSV/JSON ingestion ("frlsc-data/1"),
// synthetic generators and stratified train/test splitting.
//
// CSV layout, one row per (observation, channel):
//
//   # frlsc-data/1
//   id,class,channel,v0,v1,...
//   obs-0,0,0,0.12,0.5,...
//
// The class column holds integer ids or, if any entry is not an integer,
// class names (ids then follow first appearance). Curves are assumed to be
// uniformly sampled on [0, 1]. Rows with a point count other than the most
// common one are linearly resampled to it.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "frlsc/errors.hpp"
#include "frlsc/function_space.hpp"

namespace frlsc {

inline constexpr const char* data_format_tag = "frlsc-data/1";

struct Dataset {
  Grid grid{2};
  std::vector<FunctionalObservation> observations;
  std::vector<int> labels;
  std::vector<std::string> ids;
  std::map<int, std::string> class_names;

  std::size_t size() const noexcept { return observations.size(); }
  std::size_t channels() const noexcept {
    return observations.empty() ? 0 : observations.front().channels();
  }

  /// Distinct class ids, ascending.
  std::vector<int> classes() const {
    std::set<int> s(labels.begin(), labels.end());
    return {s.begin(), s.end()};
  }

  std::string id_of(std::size_t i) const {
    return i < ids.size() && !ids[i].empty() ? ids[i] : std::to_string(i);
  }

  void validate() const {
    if (labels.size() != observations.size()) {
      throw StructuralError("data", "label count differs from observation count");
    }
    if (!ids.empty() && ids.size() != observations.size()) {
      throw StructuralError("data", "id count differs from observation count");
    }
    for (const auto& x : observations) {
      require_same_grid(x.grid(), grid);
      if (x.channels() != channels()) {
        throw StructuralError("data", "observations differ in channel count");
      }
    }
  }

  Dataset subset(const std::vector<std::size_t>& idx) const {
    Dataset out;
    out.grid = grid;
    out.class_names = class_names;
    for (std::size_t i : idx) {
      out.observations.push_back(observations.at(i));
      out.labels.push_back(labels.at(i));
      out.ids.push_back(id_of(i));
    }
    return out;
  }
};

enum class DataFormat { csv, json };

inline DataFormat data_format_from_path(const std::string& path) {
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == "json") return DataFormat::json;
  if (ext == "csv") return DataFormat::csv;
  throw ArgumentError("data", "cannot infer data format from '" + path + "' (use .csv or .json)");
}

struct LoadResult {
  Dataset data;
  std::size_t resampled = 0;  // curves interpolated onto the common grid
};

namespace detail {

struct RawCurve {
  std::string id;
  std::string cls;
  std::size_t channel = 0;
  std::vector<double> values;
  std::size_t line = 0;  // 1-based source line, 0 when not applicable
};

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) out.push_back(trim(cur));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

inline bool parse_int(const std::string& s, long long& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

inline std::string where(const RawCurve& c) {
  return c.line ? "line " + std::to_string(c.line) : "observation '" + c.id + "'";
}

/// Groups curves into observations, maps classes and resamples to the modal m.
inline LoadResult assemble(std::vector<RawCurve> curves) {
  if (curves.empty()) throw FormatError("data", "no observations found");

  std::map<std::size_t, std::size_t> m_counts;
  for (const auto& c : curves) {
    if (c.values.size() < 2) {
      throw FormatError("data", where(c) + ": a curve needs at least 2 samples");
    }
    ++m_counts[c.values.size()];
  }
  // Most common point count; ties go to the finer grid.
  std::size_t modal = 0;
  std::size_t best = 0;
  for (const auto& [m, count] : m_counts) {
    if (count >= best) {
      best = count;
      modal = m;
    }
  }

  bool numeric_classes = true;
  for (const auto& c : curves) {
    long long v;
    if (!parse_int(c.cls, v)) numeric_classes = false;
  }
  std::map<std::string, int> name_to_id;

  LoadResult result;
  Dataset& data = result.data;
  data.grid = Grid(modal);

  std::vector<std::string> order;
  std::map<std::string, std::vector<const RawCurve*>> by_id;
  for (const auto& c : curves) {
    if (!by_id.count(c.id)) order.push_back(c.id);
    by_id[c.id].push_back(&c);
  }

  std::size_t p = 0;
  for (const auto& id : order) {
    auto& parts = by_id[id];
    std::sort(parts.begin(), parts.end(),
              [](const RawCurve* a, const RawCurve* b) { return a->channel < b->channel; });
    const RawCurve& first = *parts.front();
    if (p == 0) p = parts.size();
    if (parts.size() != p) {
      throw FormatError("data", where(first) + ": observation '" + id + "' has " +
                                    std::to_string(parts.size()) + " channels, expected " +
                                    std::to_string(p));
    }
    std::vector<SampledFunction> channels;
    for (std::size_t c = 0; c < parts.size(); ++c) {
      const RawCurve& part = *parts[c];
      if (part.channel != c) {
        throw FormatError("data", where(part) + ": observation '" + id +
                                      "' has channels that are missing or repeated");
      }
      if (part.cls != first.cls) {
        throw FormatError("data", where(part) + ": observation '" + id +
                                      "' has channels with different classes");
      }
      std::vector<double> v = part.values;
      if (v.size() != modal) {
        v = resample_linear(v, modal);
        ++result.resampled;
      }
      channels.emplace_back(data.grid, std::move(v));
    }
    data.observations.emplace_back(std::move(channels));
    data.ids.push_back(id);
    if (numeric_classes) {
      long long v = 0;
      parse_int(first.cls, v);
      data.labels.push_back(static_cast<int>(v));
    } else {
      auto it = name_to_id.find(first.cls);
      if (it == name_to_id.end()) {
        const int next = static_cast<int>(name_to_id.size());
        it = name_to_id.emplace(first.cls, next).first;
        data.class_names[next] = first.cls;
      }
      data.labels.push_back(it->second);
    }
  }
  data.validate();
  return result;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline LoadResult parse_csv(std::istream& in) {
  std::vector<detail::RawCurve> curves;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto fields = detail::split_csv_line(t);
    if (!header_seen) {
      header_seen = true;
      auto lower = [](std::string s) {
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
        return s;
      };
      if (fields.size() < 3 || lower(fields[0]) != "id" || lower(fields[1]) != "class" ||
          lower(fields[2]) != "channel") {
        throw FormatError("data", "line " + std::to_string(line_no) +
                                      ": header must start with id,class,channel");
      }
      continue;
    }
    if (fields.size() < 5) {
      throw FormatError("data", "line " + std::to_string(line_no) +
                                    ": expected id,class,channel and at least 2 values");
    }
    detail::RawCurve c;
    c.line = line_no;
    c.id = fields[0];
    c.cls = fields[1];
    if (c.id.empty()) throw FormatError("data", "line " + std::to_string(line_no) + ": empty id");
    if (c.cls.empty()) throw FormatError("data", "line " + std::to_string(line_no) + ": empty class");
    long long ch = 0;
    if (!detail::parse_int(fields[2], ch) || ch < 0) {
      throw FormatError("data", "line " + std::to_string(line_no) + ": bad channel index '" +
                                    fields[2] + "'");
    }
    c.channel = static_cast<std::size_t>(ch);
    for (std::size_t f = 3; f < fields.size(); ++f) {
      double v;
      if (!detail::parse_double(fields[f], v)) {
        throw FormatError("data", "line " + std::to_string(line_no) + ", column " +
                                      std::to_string(f + 1) + ": not a finite number '" +
                                      fields[f] + "'");
      }
      c.values.push_back(v);
    }
    curves.push_back(std::move(c));
  }
  if (!header_seen) throw FormatError("data", "empty CSV input");
  return detail::assemble(std::move(curves));
}

inline LoadResult parse_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw FormatError("data", "JSON data set must be an object");
  if (doc.value("format", std::string()) != data_format_tag) {
    throw FormatError("data", std::string("missing or unknown format tag (expected ") +
                                  data_format_tag + ")");
  }
  if (!doc.contains("observations") || !doc["observations"].is_array()) {
    throw FormatError("data", "missing 'observations' array");
  }
  std::map<int, std::string> names;
  if (doc.contains("class_names")) {
    if (!doc["class_names"].is_object()) throw FormatError("data", "'class_names' must be an object");
    for (const auto& [k, v] : doc["class_names"].items()) {
      long long id = 0;
      if (!detail::parse_int(k, id) || !v.is_string()) {
        throw FormatError("data", "class_names entry '" + k + "' must map an integer id to a string");
      }
      names[static_cast<int>(id)] = v.get<std::string>();
    }
  }
  std::vector<detail::RawCurve> curves;
  std::size_t index = 0;
  for (const auto& obs : doc["observations"]) {
    const std::string where = "observation #" + std::to_string(index);
    if (!obs.contains("class") || !obs.contains("channels") || !obs["channels"].is_array()) {
      throw FormatError("data", where + ": needs 'class' and 'channels'");
    }
    if (obs.contains("id") && !obs["id"].is_string()) throw FormatError("data", where + ": 'id' must be a string");
    std::string id = obs.contains("id") ? obs["id"].get<std::string>() : std::to_string(index);
    std::string cls;
    if (obs["class"].is_number_integer()) {
      cls = std::to_string(obs["class"].get<long long>());
    } else if (obs["class"].is_string()) {
      cls = obs["class"].get<std::string>();
    } else {
      throw FormatError("data", where + ": 'class' must be an integer or a string");
    }
    std::size_t ch = 0;
    for (const auto& values : obs["channels"]) {
      detail::RawCurve c;
      c.id = id;
      c.cls = cls;
      c.channel = ch++;
      if (!values.is_array()) throw FormatError("data", where + ": channel is not an array");
      for (const auto& v : values) {
        if (!v.is_number()) throw FormatError("data", where + ": non-numeric sample");
        c.values.push_back(v.get<double>());
      }
      curves.push_back(std::move(c));
    }
    if (ch == 0) throw FormatError("data", where + ": no channels");
    ++index;
  }
  auto result = detail::assemble(std::move(curves));
  if (!names.empty()) result.data.class_names = std::move(names);
  return result;
}

inline LoadResult load_dataset(const std::string& path, DataFormat format) {
  std::ifstream in(path);
  if (!in) throw FormatError("data", "cannot open '" + path + "'");
  if (format == DataFormat::csv) return parse_csv(in);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("data", "'" + path + "': " + e.what());
  }
  return parse_json(doc);
}

inline LoadResult load_dataset(const std::string& path) {
  return load_dataset(path, data_format_from_path(path));
}

inline void write_csv(std::ostream& out, const Dataset& data) {
  out << "# " << data_format_tag << "\n";
  out << "id,class,channel";
  for (std::size_t a = 0; a < data.grid.size(); ++a) out << ",v" << a;
  out << "\n";
  const bool named = !data.class_names.empty();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int label = data.labels[i];
    const std::string cls = named && data.class_names.count(label) ? data.class_names.at(label)
                                                                   : std::to_string(label);
    for (std::size_t c = 0; c < data.channels(); ++c) {
      out << data.id_of(i) << ',' << cls << ',' << c;
      for (double v : data.observations[i][c].values()) out << ',' << detail::format_double(v);
      out << "\n";
    }
  }
}

inline nlohmann::json to_json(const Dataset& data) {
  nlohmann::json doc;
  doc["format"] = data_format_tag;
  doc["m"] = data.grid.size();
  doc["channels"] = data.channels();
  if (!data.class_names.empty()) {
    nlohmann::json names = nlohmann::json::object();
    for (const auto& [k, v] : data.class_names) names[std::to_string(k)] = v;
    doc["class_names"] = names;
  }
  nlohmann::json obs = nlohmann::json::array();
  for (std::size_t i = 0; i < data.size(); ++i) {
    nlohmann::json o;
    o["id"] = data.id_of(i);
    o["class"] = data.labels[i];
    nlohmann::json channels = nlohmann::json::array();
    for (std::size_t c = 0; c < data.channels(); ++c) {
      const auto v = data.observations[i][c].values();
      channels.push_back(std::vector<double>(v.begin(), v.end()));
    }
    o["channels"] = std::move(channels);
    obs.push_back(std::move(o));
  }
  doc["observations"] = std::move(obs);
  return doc;
}

inline void save_dataset(const std::string& path, const Dataset& data, DataFormat format) {
  std::ofstream out(path);
  if (!out) throw FormatError("data", "cannot write '" + path + "'");
  if (format == DataFormat::csv) {
    write_csv(out, data);
  } else {
    out << to_json(data).dump(1) << "\n";
  }
}

inline void save_dataset(const std::string& path, const Dataset& data) {
  save_dataset(path, data, data_format_from_path(path));
}

struct SynthConfig {
  std::size_t n_per_class = 60;
  std::size_t classes = 4;
  std::size_t channels = 3;
  std::size_t m = 64;
  double noise_sd = 0.5;
  std::uint64_t seed = 1;

  void validate() const {
    if (n_per_class == 0 || classes == 0 || channels == 0) {
      throw ArgumentError("data", "synthetic counts must be positive");
    }
    if (m < 2) throw ArgumentError("data", "synthetic grid needs m >= 2");
    if (!(noise_sd >= 0.0)) throw ArgumentError("data", "noise_sd must be non-negative");
  }
};

/// Periodic waveform s(u) = sum_q a_q sin(2 pi q u + phi_q) shared by every
/// class; class c observes channel ch at u - lag(c, ch).
struct LagProcess {
  std::vector<double> amplitude;
  std::vector<double> phase;
  std::size_t classes = 0;
  std::size_t channels = 0;

  double lag(std::size_t cls, std::size_t ch) const {
    return 0.5 * static_cast<double>(cls * ch) / static_cast<double>(classes * channels);
  }

  double waveform(double u) const {
    double s = 0.0;
    for (std::size_t q = 0; q < amplitude.size(); ++q) {
      s += amplitude[q] *
           std::sin(2.0 * std::numbers::pi * static_cast<double>(q + 1) * u + phase[q]);
    }
    return s;
  }

  double value(std::size_t cls, std::size_t ch, double u) const {
    return waveform(u - lag(cls, ch));
  }
};

struct SynthLagSample {
  Dataset data;
  LagProcess process;
  std::vector<double> shifts;  // per observation
};

/// Classes that differ only in the lag pattern between channels. Every
/// observation is the class template read at t + shift with a uniform random
/// shift, so the value distribution at each time point is the same for every
/// class and channel.
inline SynthLagSample synth_lag_sample(const SynthConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  SynthLagSample out;
  out.process.classes = cfg.classes;
  out.process.channels = cfg.channels;
  constexpr std::size_t harmonics = 3;
  double energy = 0.0;
  for (std::size_t q = 0; q < harmonics; ++q) {
    const double a = normal(rng) / static_cast<double>(q + 1);
    out.process.amplitude.push_back(a);
    out.process.phase.push_back(2.0 * std::numbers::pi * uniform(rng));
    energy += 0.5 * a * a;
  }
  // Unit mean power.
  for (double& a : out.process.amplitude) a /= std::sqrt(energy);

  Dataset& data = out.data;
  data.grid = Grid(cfg.m);
  for (std::size_t c = 0; c < cfg.classes; ++c) {
    for (std::size_t r = 0; r < cfg.n_per_class; ++r) {
      const double shift = uniform(rng);
      std::vector<SampledFunction> channels;
      for (std::size_t ch = 0; ch < cfg.channels; ++ch) {
        std::vector<double> v(cfg.m);
        for (std::size_t a = 0; a < cfg.m; ++a) {
          v[a] = out.process.value(c, ch, data.grid.point(a) + shift);
          if (cfg.noise_sd > 0.0) v[a] += cfg.noise_sd * normal(rng);
        }
        channels.emplace_back(data.grid, std::move(v));
      }
      data.observations.emplace_back(std::move(channels));
      data.labels.push_back(static_cast<int>(c));
      data.ids.push_back("lag-" + std::to_string(c) + "-" + std::to_string(r));
      out.shifts.push_back(shift);
    }
  }
  return out;
}

inline Dataset synth_lag_dataset(const SynthConfig& cfg) { return synth_lag_sample(cfg).data; }

/// Control data with no temporal structure: every sample is an independent
/// draw around a class- and channel-specific level.
inline Dataset synth_iid_dataset(const SynthConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> level(cfg.classes * cfg.channels);
  for (double& l : level) l = 0.15 * normal(rng);

  Dataset data;
  data.grid = Grid(cfg.m);
  for (std::size_t c = 0; c < cfg.classes; ++c) {
    for (std::size_t r = 0; r < cfg.n_per_class; ++r) {
      std::vector<SampledFunction> channels;
      for (std::size_t ch = 0; ch < cfg.channels; ++ch) {
        std::vector<double> v(cfg.m);
        for (double& x : v) x = level[c * cfg.channels + ch] + cfg.noise_sd * normal(rng);
        channels.emplace_back(data.grid, std::move(v));
      }
      data.observations.emplace_back(std::move(channels));
      data.labels.push_back(static_cast<int>(c));
      data.ids.push_back("iid-" + std::to_string(c) + "-" + std::to_string(r));
    }
  }
  return data;
}

struct Split {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_index;
  std::vector<std::size_t> test_index;
};

/// Stratified split: each class contributes round(fraction * count) items to
/// the training side, clamped so both sides get at least one.
inline Split split(const Dataset& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ArgumentError("data", "train fraction must lie in (0, 1)");
  }
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < data.size(); ++i) by_class[data.labels[i]].push_back(i);
  std::mt19937_64 rng(seed);
  Split out;
  for (auto& [cls, idx] : by_class) {
    if (idx.size() < 2) {
      throw ArgumentError("data", "class " + std::to_string(cls) + " has fewer than 2 items");
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    auto n_train = static_cast<std::size_t>(std::lround(train_fraction * static_cast<double>(idx.size())));
    n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
    out.train_index.insert(out.train_index.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test_index.insert(out.test_index.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  }
  std::sort(out.train_index.begin(), out.train_index.end());
  std::sort(out.test_index.begin(), out.test_index.end());
  out.train = data.subset(out.train_index);
  out.test = data.subset(out.test_index);
  return out;
}

}  // namespace frlsc

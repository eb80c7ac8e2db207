#pragma once

// Scenario configuration (JSON) and deterministic CSV/JSON emission for the command-line front end.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "tomodyn/gaussian_dynamics.hpp"
#include "tomodyn/tomography.hpp"

namespace tomodyn {

/// Configuration problem, already formatted with a source line when one is known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputKind { purity_curve, tomogram_slice, coefficients };
enum class OutputFormat { csv, json };

struct SliceParams {
  double mu = 1.0;
  double nu = 0.0;
  double x_min = -5.0;
  double x_max = 5.0;
  int n_x = 101;
};

struct OutputSpec {
  OutputKind kind = OutputKind::purity_curve;
  std::filesystem::path path;
  OutputFormat format = OutputFormat::csv;
  SliceParams slice;
};

struct ScenarioConfig {
  complex u;
  complex v;
  complex alpha;
  double t_start = 0.0;
  double t_end = 1.0;
  int n_steps = 2;
  std::vector<OutputSpec> outputs;

  /// n_steps uniformly spaced times; the last one is t_end exactly.
  std::vector<double> times() const {
    std::vector<double> ts(static_cast<std::size_t>(n_steps));
    const double dt = (t_end - t_start) / static_cast<double>(n_steps - 1);
    for (int i = 0; i < n_steps; ++i) ts[static_cast<std::size_t>(i)] = t_start + dt * i;
    ts.back() = t_end;
    return ts;
  }
};

inline const char* kind_name(OutputKind k) {
  switch (k) {
    case OutputKind::purity_curve: return "purity_curve";
    case OutputKind::tomogram_slice: return "tomogram_slice";
    case OutputKind::coefficients: return "coefficients";
  }
  return "?";
}

namespace detail {

inline int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Skips a JSON string starting at text[pos] == '"'; returns the index just past the closing quote.
inline std::size_t skip_string(const std::string& text, std::size_t pos) {
  for (++pos; pos < text.size(); ++pos) {
    if (text[pos] == '\\') {
      ++pos;
    } else if (text[pos] == '"') {
      return pos + 1;
    }
  }
  return pos;
}

// Best-effort source offset of a JSON pointer inside text (which is known to parse).
inline std::size_t locate_pointer(const std::string& text, const std::string& pointer) {
  std::size_t pos = text.find_first_not_of(" \t\r\n");
  if (pos == std::string::npos) return 0;
  std::stringstream ss(pointer);
  std::string seg;
  std::getline(ss, seg, '/');  // leading empty segment
  while (std::getline(ss, seg, '/')) {
    if (pos >= text.size()) return text.size();
    if (text[pos] == '{') {
      // scan members at depth 1 for the key
      int depth = 0;
      std::size_t i = pos;
      bool found = false;
      for (; i < text.size(); ++i) {
        const char ch = text[i];
        if (ch == '"') {
          const std::size_t end = skip_string(text, i);
          if (depth == 1 && text.compare(i + 1, end - i - 2, seg) == 0) {
            std::size_t colon = text.find(':', end);
            pos = text.find_first_not_of(" \t\r\n", colon + 1);
            found = true;
            i = end;
            break;
          }
          i = end - 1;
        } else if (ch == '{' || ch == '[') {
          ++depth;
        } else if (ch == '}' || ch == ']') {
          if (--depth == 0) break;
        }
      }
      if (!found) return pos;
    } else if (text[pos] == '[') {
      const long want = std::strtol(seg.c_str(), nullptr, 10);
      long idx = 0;
      int depth = 0;
      std::size_t i = pos;
      std::size_t elem = text.find_first_not_of(" \t\r\n", pos + 1);
      for (; i < text.size() && idx < want; ++i) {
        const char ch = text[i];
        if (ch == '"') {
          i = skip_string(text, i) - 1;
        } else if (ch == '{' || ch == '[') {
          ++depth;
        } else if (ch == '}' || ch == ']') {
          if (--depth == 0) break;
        } else if (ch == ',' && depth == 1) {
          ++idx;
          elem = text.find_first_not_of(" \t\r\n", i + 1);
        }
      }
      pos = elem;
    } else {
      return pos;
    }
  }
  return pos;
}

struct ConfigReader {
  const std::string& text;
  std::string source;

  [[noreturn]] void fail(const std::string& pointer, const std::string& what) const {
    const int line = line_of_offset(text, locate_pointer(text, pointer));
    throw ConfigError(source + ":" + std::to_string(line) + ": " + (pointer.empty() ? "/" : pointer) + ": " + what);
  }

  double number(const nlohmann::json& j, const std::string& ptr) const {
    if (!j.is_number()) fail(ptr, "expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) fail(ptr, "expected a finite number");
    return x;
  }

  complex complex_pair(const nlohmann::json& j, const std::string& ptr) const {
    if (!j.is_array() || j.size() != 2) fail(ptr, "expected a complex number as [re, im]");
    return {number(j[0], ptr + "/0"), number(j[1], ptr + "/1")};
  }

  int integer(const nlohmann::json& j, const std::string& ptr) const {
    if (!j.is_number_integer()) fail(ptr, "expected an integer");
    return j.get<int>();
  }

  std::string string(const nlohmann::json& j, const std::string& ptr) const {
    if (!j.is_string()) fail(ptr, "expected a string");
    return j.get<std::string>();
  }

  const nlohmann::json& required(const nlohmann::json& obj, const std::string& key, const std::string& ptr) const {
    if (!obj.contains(key)) fail(ptr, "missing required key \"" + key + "\"");
    return obj.at(key);
  }

  void only_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed, const std::string& ptr) const {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || it.key() == a;
      if (!ok) fail(ptr + "/" + it.key(), "unknown key");
    }
  }
};

}  // namespace detail

/// Parses and validates a scenario. Relative output paths resolve against base_dir.
inline ScenarioConfig parse_scenario(const std::string& text, const std::string& source_name,
                                     const std::filesystem::path& base_dir) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const int line = detail::line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError(source_name + ":" + std::to_string(line) + ": JSON parse error: " + e.what());
  }
  detail::ConfigReader rd{text, source_name};
  if (!root.is_object()) rd.fail("", "top level must be a JSON object");
  rd.only_keys(root, {"u", "v", "alpha", "t_start", "t_end", "n_steps", "outputs"}, "");

  ScenarioConfig cfg;
  cfg.u = rd.complex_pair(rd.required(root, "u", ""), "/u");
  cfg.v = rd.complex_pair(rd.required(root, "v", ""), "/v");
  cfg.alpha = root.contains("alpha") ? rd.complex_pair(root["alpha"], "/alpha") : complex(0.0, 0.0);
  cfg.t_start = root.contains("t_start") ? rd.number(root["t_start"], "/t_start") : 0.0;
  cfg.t_end = rd.number(rd.required(root, "t_end", ""), "/t_end");
  cfg.n_steps = rd.integer(rd.required(root, "n_steps", ""), "/n_steps");
  if (cfg.t_start < 0.0) rd.fail("/t_start", "t_start must be >= 0");
  if (!(cfg.t_end > cfg.t_start)) rd.fail("/t_end", "t_end must exceed t_start");
  if (cfg.n_steps < 2) rd.fail("/n_steps", "n_steps must be >= 2");

  const nlohmann::json& outs = rd.required(root, "outputs", "");
  if (!outs.is_array() || outs.empty()) rd.fail("/outputs", "expected a non-empty array");
  for (std::size_t i = 0; i < outs.size(); ++i) {
    const std::string ptr = "/outputs/" + std::to_string(i);
    const nlohmann::json& o = outs[i];
    if (!o.is_object()) rd.fail(ptr, "expected an object");
    rd.only_keys(o, {"kind", "path", "format", "mu", "nu", "x_min", "x_max", "n_x"}, ptr);
    OutputSpec spec;
    const std::string kind = rd.string(rd.required(o, "kind", ptr), ptr + "/kind");
    if (kind == "purity_curve") {
      spec.kind = OutputKind::purity_curve;
    } else if (kind == "tomogram_slice") {
      spec.kind = OutputKind::tomogram_slice;
    } else if (kind == "coefficients") {
      spec.kind = OutputKind::coefficients;
    } else {
      rd.fail(ptr + "/kind", "kind must be purity_curve, tomogram_slice or coefficients");
    }
    const std::string path = rd.string(rd.required(o, "path", ptr), ptr + "/path");
    if (path.empty()) rd.fail(ptr + "/path", "path must not be empty");
    spec.path = std::filesystem::path(path).is_absolute() ? std::filesystem::path(path) : base_dir / path;
    const std::string fmt = o.contains("format") ? rd.string(o["format"], ptr + "/format") : "csv";
    if (fmt == "csv") {
      spec.format = OutputFormat::csv;
    } else if (fmt == "json") {
      spec.format = OutputFormat::json;
    } else {
      rd.fail(ptr + "/format", "format must be csv or json");
    }
    if (spec.kind == OutputKind::tomogram_slice) {
      SliceParams& s = spec.slice;
      s.mu = rd.number(rd.required(o, "mu", ptr), ptr + "/mu");
      s.nu = rd.number(rd.required(o, "nu", ptr), ptr + "/nu");
      if (s.mu == 0.0 && s.nu == 0.0) rd.fail(ptr + "/nu", "mu and nu must not both be zero");
      if (o.contains("x_min")) s.x_min = rd.number(o["x_min"], ptr + "/x_min");
      if (o.contains("x_max")) s.x_max = rd.number(o["x_max"], ptr + "/x_max");
      if (o.contains("n_x")) s.n_x = rd.integer(o["n_x"], ptr + "/n_x");
      if (!(s.x_max > s.x_min)) rd.fail(ptr + "/x_max", "x_max must exceed x_min");
      if (s.n_x < 2) rd.fail(ptr + "/n_x", "n_x must be >= 2");
    } else {
      for (const char* k : {"mu", "nu", "x_min", "x_max", "n_x"}) {
        if (o.contains(k)) rd.fail(ptr + "/" + k, "slice parameters are only valid for kind tomogram_slice");
      }
    }
    cfg.outputs.push_back(std::move(spec));
  }
  return cfg;
}

inline ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::filesystem::path base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  return parse_scenario(buf.str(), path.string(), base);
}

/// 17 significant digits: round-trip exact for doubles.
inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Column names plus numeric rows; the unit written to one output file.
struct Table {
  std::string kind;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

inline const std::vector<std::string>& purity_columns() {
  static const std::vector<std::string> cols{"t", "C", "D", "E", "lambda", "delta", "purity"};
  return cols;
}

inline Table purity_table(const CoherentAmplitude& a, const DampingParams& p, std::span<const double> times) {
  Table tab{"purity_curve", purity_columns(), {}};
  for (const PurityRow& r : purity_curve(a, p, times)) {
    tab.rows.push_back({r.t, r.C, r.D, r.E, r.lambda, r.delta, r.purity});
  }
  return tab;
}

inline Table coefficient_table(const CoherentAmplitude& a, const DampingParams& p, std::span<const double> times) {
  Table tab{"coefficients", {"t", "C", "D", "E", "lambda", "delta"}, {}};
  for (double t : times) {
    const GaussianTomogram g = evolve_coherent(a, p, t);
    tab.rows.push_back({t, g.C, g.D, g.E, g.lambda, g.delta});
  }
  return tab;
}

inline Table slice_table(const CoherentAmplitude& a, const DampingParams& p, std::span<const double> times,
                         const SliceParams& s) {
  Table tab{"tomogram_slice", {"t", "X", "mu", "nu", "w"}, {}};
  for (double t : times) {
    const GaussianTomogram g = evolve_coherent(a, p, t);
    for (int i = 0; i < s.n_x; ++i) {
      const double X = i == s.n_x - 1 ? s.x_max : s.x_min + (s.x_max - s.x_min) * i / (s.n_x - 1);
      tab.rows.push_back({t, X, s.mu, s.nu, gaussian_tomogram_eval(g, X, s.mu, s.nu)});
    }
  }
  return tab;
}

inline std::string to_csv(const Table& tab) {
  std::string out;
  for (std::size_t i = 0; i < tab.columns.size(); ++i) out += (i ? "," : "") + tab.columns[i];
  out += '\n';
  for (const auto& row : tab.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

inline std::string to_json(const Table& tab, const ScenarioConfig* cfg = nullptr) {
  nlohmann::ordered_json doc;
  doc["kind"] = tab.kind;
  if (cfg != nullptr) {
    doc["u"] = {cfg->u.real(), cfg->u.imag()};
    doc["v"] = {cfg->v.real(), cfg->v.imag()};
    doc["alpha"] = {cfg->alpha.real(), cfg->alpha.imag()};
  }
  doc["columns"] = tab.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : tab.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) obj[tab.columns[i]] = row[i];
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

/// Creates missing parent directories, then writes the file in binary mode.
inline void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError(path.string() + ": cannot open output file for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw ConfigError(path.string() + ": write failed");
}

/// Evaluates every requested output and writes it. Returns the written paths in config order.
inline std::vector<std::filesystem::path> run_scenario(const ScenarioConfig& cfg) {
  const DampingParams p(cfg.u, cfg.v);
  const CoherentAmplitude a(cfg.alpha);
  const std::vector<double> ts = cfg.times();
  std::vector<std::filesystem::path> written;
  for (const OutputSpec& o : cfg.outputs) {
    Table tab;
    switch (o.kind) {
      case OutputKind::purity_curve: tab = purity_table(a, p, ts); break;
      case OutputKind::coefficients: tab = coefficient_table(a, p, ts); break;
      case OutputKind::tomogram_slice: tab = slice_table(a, p, ts, o.slice); break;
    }
    write_file(o.path, o.format == OutputFormat::csv ? to_csv(tab) : to_json(tab, &cfg));
    written.push_back(o.path);
  }
  return written;
}

/// Purity curves for (u, v) = (1, 10i) and (1, 1 + 2i) on t ∈ [0, 5], 501 points, vacuum initial state.
inline std::vector<std::filesystem::path> write_fig2(const std::filesystem::path& dir) {
  std::vector<double> ts(501);
  for (int i = 0; i < 501; ++i) ts[static_cast<std::size_t>(i)] = i / 100.0;
  ts.back() = 5.0;
  const CoherentAmplitude vacuum;
  const std::filesystem::path a = dir / "fig2a.csv";
  const std::filesystem::path b = dir / "fig2b.csv";
  write_file(a, to_csv(purity_table(vacuum, DampingParams({1.0, 0.0}, {0.0, 10.0}), ts)));
  write_file(b, to_csv(purity_table(vacuum, DampingParams({1.0, 0.0}, {1.0, 2.0}), ts)));
  return {a, b};
}

}  // namespace tomodyn

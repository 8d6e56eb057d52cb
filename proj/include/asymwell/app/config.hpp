#ifndef ASYMWELL_APP_CONFIG_HPP
#define ASYMWELL_APP_CONFIG_HPP

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "asymwell/error.hpp"
#include "asymwell/oracle.hpp"
#include "asymwell/potential.hpp"

namespace asymwell::app {

using nlohmann::json;

struct PotentialSpec {
  std::string family;
  json params;
  double certification_tolerance = 1e-9;
};

struct OutputSpec {
  std::string format = "csv";
  std::string path = "-";
};

struct SweepSpec {
  std::string parameter;  // dotted path into the config, e.g. potential.params.bias
  double from = 0.0;
  double to = 0.0;
  int steps = 2;

  double value(int i) const { return steps == 1 ? from : from + (to - from) * i / (steps - 1); }
};

/// Grid bounds default to the potential's certified domain.
struct GridConfig {
  std::optional<double> x_lo;
  std::optional<double> x_hi;
  int n_points = 8001;

  GridSpec resolve(const DoubleWellPotential& potential) const {
    const GridSpec automatic = auto_grid(potential, n_points);
    return {x_lo.value_or(automatic.x_lo), x_hi.value_or(automatic.x_hi), n_points};
  }
};

struct RunConfig {
  UnitsConfig units;
  PotentialSpec potential;
  std::vector<std::pair<int, int>> levels{{0, 0}};
  GridConfig grid;
  std::optional<double> c_override;
  OracleOptions oracle;
  OutputSpec output;
  std::optional<SweepSpec> sweep;
  json source;                        // validated document, echoed in outputs
  std::filesystem::path base_dir = ".";  // relative paths resolve against the config file
};

namespace config_detail {

[[noreturn]] inline void bad(const std::string& path, const std::string& what) {
  fail(ErrorKind::config, (path.empty() ? std::string("config") : path) + ": " + what);
}

inline std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

/// Rejects keys outside `allowed` and provides typed, path-aware accessors.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) bad(path_, "expected an object");
  }

  void allow(std::initializer_list<std::string_view> keys) const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      bool known = false;
      for (auto k : keys) known = known || it.key() == k;
      if (!known) bad(join(path_, it.key()), "unknown key");
    }
  }

  bool has(std::string_view key) const { return node_.contains(std::string(key)) && !node_.at(std::string(key)).is_null(); }

  const json& at(std::string_view key) const {
    if (!has(key)) bad(join(path_, key), "missing required field");
    return node_.at(std::string(key));
  }

  double number(std::string_view key) const {
    const json& v = at(key);
    if (!v.is_number()) bad(join(path_, key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) bad(join(path_, key), "expected a finite number");
    return d;
  }

  double number_or(std::string_view key, double fallback) const { return has(key) ? number(key) : fallback; }

  double positive(std::string_view key) const {
    const double d = number(key);
    if (!(d > 0.0)) bad(join(path_, key), "must be positive");
    return d;
  }

  int integer(std::string_view key) const {
    const json& v = at(key);
    if (!v.is_number_integer()) bad(join(path_, key), "expected an integer");
    return v.get<int>();
  }

  std::string string(std::string_view key) const {
    const json& v = at(key);
    if (!v.is_string()) bad(join(path_, key), "expected a string");
    return v.get<std::string>();
  }

  Reader child(std::string_view key) const { return Reader(at(key), join(path_, key)); }
  const std::string& path() const { return path_; }

 private:
  const json& node_;
  std::string path_;
};

inline void check_well(const Reader& r) {
  r.allow({"a", "omega", "v_min", "extent"});
  r.number("a");
  r.positive("omega");
  r.number("v_min");
  r.positive("extent");
}

inline void check_params(const std::string& family, const Reader& p) {
  if (family == "biased_quartic") {
    p.allow({"half_separation", "barrier_scale", "bias"});
    p.positive("half_separation");
    p.positive("barrier_scale");
    p.number_or("bias", 0.0);
  } else if (family == "piecewise_parabolic") {
    p.allow({"left", "right", "barrier_height"});
    check_well(p.child("left"));
    check_well(p.child("right"));
    p.positive("barrier_height");
  } else if (family == "tabulated") {
    p.allow({"csv"});
    p.string("csv");
  } else {
    bad("potential.family", "unknown family '" + family + "' (expected biased_quartic, piecewise_parabolic or tabulated)");
  }
}

}  // namespace config_detail

/// Validates a config document; every error names the offending field.
inline RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir = ".") {
  using config_detail::bad;
  using config_detail::Reader;
  const Reader root(doc, "");
  root.allow({"units", "potential", "levels", "grid", "c_override", "oracle", "output", "sweep"});
  RunConfig cfg;
  cfg.base_dir = base_dir;
  if (root.has("units")) {
    const Reader u = root.child("units");
    u.allow({"hbar", "mass"});
    cfg.units.hbar = u.has("hbar") ? u.positive("hbar") : 1.0;
    cfg.units.mass = u.has("mass") ? u.positive("mass") : 1.0;
  }
  {
    const Reader p = root.child("potential");
    p.allow({"family", "params", "certification_tolerance"});
    cfg.potential.family = p.string("family");
    config_detail::check_params(cfg.potential.family, p.child("params"));
    cfg.potential.params = p.at("params");
    if (p.has("certification_tolerance")) cfg.potential.certification_tolerance = p.positive("certification_tolerance");
  }
  if (root.has("levels")) {
    const json& levels = root.at("levels");
    if (!levels.is_array() || levels.empty()) bad("levels", "expected a non-empty array of [n_l, n_r] pairs");
    cfg.levels.clear();
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const std::string path = "levels[" + std::to_string(i) + "]";
      const json& pair = levels[i];
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer()) {
        bad(path, "expected [n_l, n_r] with integer entries");
      }
      const int nl = pair[0].get<int>();
      const int nr = pair[1].get<int>();
      if (nl < 0 || nr < 0 || nl > 6 || nr > 6) bad(path, "level indices must lie in [0, 6]");
      cfg.levels.emplace_back(nl, nr);
    }
  }
  if (root.has("grid")) {
    const Reader g = root.child("grid");
    g.allow({"x_lo", "x_hi", "n_points"});
    if (g.has("x_lo") != g.has("x_hi")) bad(g.has("x_lo") ? "grid.x_hi" : "grid.x_lo", "x_lo and x_hi must be given together");
    if (g.has("x_lo")) {
      cfg.grid.x_lo = g.number("x_lo");
      cfg.grid.x_hi = g.number("x_hi");
      if (!(*cfg.grid.x_lo < *cfg.grid.x_hi)) bad("grid.x_hi", "must exceed grid.x_lo");
    }
    if (g.has("n_points")) cfg.grid.n_points = g.integer("n_points");
    if (cfg.grid.n_points < 501) bad("grid.n_points", "must be at least 501");
  }
  if (root.has("c_override")) cfg.c_override = root.number("c_override");
  if (root.has("oracle")) {
    const Reader o = root.child("oracle");
    o.allow({"scheme"});
    if (o.has("scheme")) {
      const std::string s = o.string("scheme");
      if (s == "three_point") cfg.oracle.scheme = Discretization::three_point;
      else if (s == "numerov_corrected") cfg.oracle.scheme = Discretization::numerov_corrected;
      else bad("oracle.scheme", "expected three_point or numerov_corrected");
    }
  }
  if (root.has("output")) {
    const Reader o = root.child("output");
    o.allow({"format", "path"});
    if (o.has("format")) cfg.output.format = o.string("format");
    if (cfg.output.format != "csv" && cfg.output.format != "json") bad("output.format", "expected csv or json");
    if (o.has("path")) cfg.output.path = o.string("path");
  }
  if (root.has("sweep")) {
    const Reader s = root.child("sweep");
    s.allow({"parameter", "from", "to", "steps"});
    SweepSpec sweep;
    sweep.parameter = s.string("parameter");
    sweep.from = s.number("from");
    sweep.to = s.number("to");
    sweep.steps = s.integer("steps");
    if (sweep.steps < 1) bad("sweep.steps", "must be at least 1");
    cfg.sweep = sweep;
  }
  cfg.source = doc;
  return cfg;
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::config, "cannot open config file '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::config, "config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

inline RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_json_file(path), path.parent_path().empty() ? "." : path.parent_path());
}

/// Copy of the document with the value at a dotted path replaced.
inline json with_parameter(const json& doc, const std::string& dotted, double value) {
  std::string pointer;
  std::stringstream ss(dotted);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) fail(ErrorKind::config, "sweep.parameter: malformed path '" + dotted + "'");
    pointer += "/" + part;
  }
  json copy = doc;
  const json::json_pointer ptr(pointer);
  if (!copy.contains(ptr) || !copy.at(ptr).is_number()) {
    fail(ErrorKind::config, "sweep.parameter: '" + dotted + "' does not name a numeric config field");
  }
  copy[ptr] = value;
  return copy;
}

/// Two-column (x, V) table; '#' comments and a non-numeric header row are skipped.
inline std::pair<std::vector<double>, std::vector<double>> read_table_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::config, "potential.params.csv: cannot open '" + path.string() + "'");
  std::vector<double> xs;
  std::vector<double> vs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail(ErrorKind::config, "potential.params.csv: line " + std::to_string(line_no) + " lacks a comma");
    try {
      const double x = std::stod(line.substr(0, comma));
      const double v = std::stod(line.substr(comma + 1));
      xs.push_back(x);
      vs.push_back(v);
    } catch (const std::exception&) {
      if (xs.empty()) continue;  // header row
      fail(ErrorKind::config, "potential.params.csv: line " + std::to_string(line_no) + " is not numeric");
    }
  }
  return {xs, vs};
}

inline WellParams well_from(const json& j, const UnitsConfig& units) {
  return WellParams::make(j.at("a").get<double>(), j.at("omega").get<double>(), j.at("v_min").get<double>(),
                          j.at("extent").get<double>(), units);
}

/// Builds the configured potential, applying c_override.
inline DoubleWellPotential make_potential(const RunConfig& cfg) {
  const auto& p = cfg.potential.params;
  const CertificationOptions cert{cfg.potential.certification_tolerance};
  auto build = [&]() {
    if (cfg.potential.family == "biased_quartic") {
      return build_biased_quartic(p.at("half_separation").get<double>(), p.at("barrier_scale").get<double>(),
                                  p.value("bias", 0.0), cfg.units, cert);
    }
    if (cfg.potential.family == "piecewise_parabolic") {
      const WellParams l = well_from(p.at("left"), cfg.units);
      const WellParams r = well_from(p.at("right"), cfg.units);
      return build_piecewise_parabolic(l, r, {l.parabolic_extent, r.parabolic_extent},
                                       p.at("barrier_height").get<double>(), cfg.units);
    }
    std::filesystem::path csv = p.at("csv").get<std::string>();
    if (csv.is_relative()) csv = cfg.base_dir / csv;
    const auto [xs, vs] = read_table_csv(csv);
    return build_tabulated(xs, vs, cfg.units, cert);
  };
  DoubleWellPotential pot = build();
  if (cfg.c_override) return pot.with_c(*cfg.c_override);
  return pot;
}

}  // namespace asymwell::app

#endif  // ASYMWELL_APP_CONFIG_HPP

#ifndef ASYMWELL_APP_COMMANDS_HPP
#define ASYMWELL_APP_COMMANDS_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "asymwell/app/config.hpp"
#include "asymwell/error.hpp"
#include "asymwell/oracle.hpp"
#include "asymwell/potential.hpp"
#include "asymwell/quantize.hpp"
#include "asymwell/specfun.hpp"
#include "asymwell/twolevel.hpp"
#include "asymwell/wkb_matching.hpp"

namespace asymwell::app {

enum ExitCode : int { exit_ok = 0, exit_verify_failed = 1, exit_config = 2, exit_numeric = 3 };

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config:
    case ErrorKind::construction:
    case ErrorKind::shape:
    case ErrorKind::no_barrier:
    case ErrorKind::coverage:
      return exit_config;
    default:
      return exit_numeric;
  }
}

inline std::string error_json(ErrorKind kind, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"]["kind"] = to_string(kind);
  j["error"]["message"] = message;
  j["error"]["exit_code"] = exit_code_for(kind);
  return j.dump();
}

using Cell = std::variant<std::monostate, double, long long, std::string>;

/// Ordered key/value record; keys keep their first-insertion position.
struct Row {
  std::vector<std::pair<std::string, Cell>> cells;

  void set(const std::string& key, Cell value) {
    for (auto& [k, v] : cells) {
      if (k == key) {
        v = std::move(value);
        return;
      }
    }
    cells.emplace_back(key, std::move(value));
  }

  void set(const std::string& key, double value) { set(key, Cell(value)); }
  void set(const std::string& key, int value) { set(key, Cell(static_cast<long long>(value))); }
  void set(const std::string& key, const char* value) { set(key, Cell(std::string(value))); }
  void set(const std::string& key, std::string value) { set(key, Cell(std::move(value))); }

  const Cell* find(const std::string& key) const {
    for (const auto& [k, v] : cells) {
      if (k == key) return &v;
    }
    return nullptr;
  }

  double number(const std::string& key) const {
    const Cell* c = find(key);
    if (c == nullptr) return std::nan("");
    if (const double* d = std::get_if<double>(c)) return *d;
    if (const long long* i = std::get_if<long long>(c)) return static_cast<double>(*i);
    return std::nan("");
  }

  std::string text(const std::string& key) const {
    const Cell* c = find(key);
    if (c == nullptr) return {};
    if (const std::string* s = std::get_if<std::string>(c)) return *s;
    return {};
  }

  void note(const std::string& message) {
    const std::string prior = text("notes");
    set("notes", prior.empty() ? message : prior + "; " + message);
  }
};

struct Report {
  std::string command;
  json inputs;
  std::vector<Row> rows;
};

struct RunOptions {
  int jobs = 1;
  bool timings = false;
};

namespace commands_detail {

inline std::string format_number(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string csv_cell(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return format_number(*d);
  if (const long long* i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (const std::string* s = std::get_if<std::string>(&c)) return csv_escape(*s);
  return {};
}

inline nlohmann::ordered_json json_cell(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return *d;
  if (const long long* i = std::get_if<long long>(&c)) return *i;
  if (const std::string* s = std::get_if<std::string>(&c)) return *s;
  return nullptr;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline double relative(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

}  // namespace commands_detail

/// CSV: '#'-prefixed echo lines, then a header row covering every column seen; JSON: one document.
inline void write_report(std::ostream& os, const Report& report, const std::string& format) {
  using namespace commands_detail;
  if (format == "json") {
    nlohmann::ordered_json doc;
    doc["command"] = report.command;
    doc["config"] = nlohmann::ordered_json::parse(report.inputs.dump());
    doc["rows"] = nlohmann::ordered_json::array();
    for (const Row& row : report.rows) {
      nlohmann::ordered_json r = nlohmann::ordered_json::object();
      for (const auto& [k, v] : row.cells) r[k] = json_cell(v);
      doc["rows"].push_back(std::move(r));
    }
    os << doc.dump(2) << "\n";
    return;
  }
  std::vector<std::string> columns;
  for (const Row& row : report.rows) {
    for (const auto& [k, v] : row.cells) {
      if (std::find(columns.begin(), columns.end(), k) == columns.end()) columns.push_back(k);
    }
  }
  os << "# command: " << report.command << "\n";
  os << "# config: " << report.inputs.dump() << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << csv_escape(columns[i]);
  os << "\n";
  for (const Row& row : report.rows) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const Cell* c = row.find(columns[i]);
      os << (i ? "," : "") << (c ? csv_cell(*c) : std::string());
    }
    os << "\n";
  }
}

/// Enough oracle states to contain every requested pair with one spare level per well.
inline int oracle_state_count(const DoubleWellPotential& potential, const std::vector<std::pair<int, int>>& levels) {
  const UnitsConfig& u = potential.units();
  double e_max = -std::numeric_limits<double>::infinity();
  for (const auto& [nl, nr] : levels) {
    e_max = std::max(e_max, 0.5 * (epsilon_level(potential.left(), nl, u) + epsilon_level(potential.right(), nr, u)));
  }
  int count = 0;
  for (const WellParams* w : {&potential.left(), &potential.right()}) {
    for (int k = 0; epsilon_level(*w, k, u) < e_max + 1.5 * w->quantum(u); ++k) ++count;
  }
  return std::clamp(count, 2, 20);
}

inline SpectrumResult oracle_for(const DoubleWellPotential& potential, const RunConfig& cfg) {
  return solve_spectrum(potential, cfg.grid.resolve(potential), oracle_state_count(potential, cfg.levels), cfg.oracle);
}

/// Side-by-side semiclassical and oracle results for one (n_l, n_r) pair. Core failures propagate;
/// optional diagnostics that fail are recorded under `notes`.
inline Row level_row(const DoubleWellPotential& potential, const SpectrumResult& spectrum, int n_l, int n_r) {
  using commands_detail::relative;
  const UnitsConfig& u = potential.units();
  Row row;
  row.set("n_l", n_l);
  row.set("n_r", n_r);
  const double eps_l = epsilon_level(potential.left(), n_l, u);
  const double eps_r = epsilon_level(potential.right(), n_r, u);
  const double d_eps = eps_l - eps_r;
  const double quantum = potential.min_quantum();
  row.set("eps_l", eps_l);
  row.set("eps_r", eps_r);
  row.set("delta_eps", d_eps);
  row.set("c", potential.c());

  const double delta = splitting_degenerate(potential, n_l, n_r);
  const PairSolution exact = solve_pair_exact(potential, n_l, n_r);
  const PairSolution quad = solve_pair_quadratic(potential, n_l, n_r);
  const double tilde = tilde_delta(potential, n_l, n_r, potential.c());
  row.set("action", exact.action);
  row.set("delta", delta);
  row.set("tilde_delta", tilde);
  row.set("delta_e_tls", std::hypot(d_eps, delta));
  row.set("e_plus_exact", exact.e_plus);
  row.set("e_minus_exact", exact.e_minus);
  row.set("delta_e_exact", exact.delta_e);
  row.set("e_plus_quadratic", quad.e_plus);
  row.set("e_minus_quadratic", quad.e_minus);
  row.set("delta_e_quadratic", quad.delta_e);

  const double theta = mixing_angle(d_eps, tilde, n_r);
  row.set("theta", theta);
  row.set("tls_p_left_upper", std::pow(std::cos(0.5 * theta), 2));
  row.set("tls_p_left_lower", std::pow(std::sin(0.5 * theta), 2));

  const PairClassification cls = resolve_pair_or_single(spectrum, potential, n_l, n_r);
  const double err_lo = spectrum.error_estimates[cls.lower_index];
  const double err_hi = spectrum.error_estimates[cls.upper_index];
  row.set("e_lower_oracle", cls.lower_energy);
  row.set("e_upper_oracle", cls.upper_energy);
  row.set("gap_oracle", cls.gap);
  row.set("oracle_error_estimate", std::max(err_lo, err_hi));
  row.set("oracle_class", to_string(cls.kind));
  row.set("p_left_lower_oracle", cls.lower_split.first);
  row.set("p_right_lower_oracle", cls.lower_split.second);
  row.set("p_left_upper_oracle", cls.upper_split.first);
  row.set("p_right_upper_oracle", cls.upper_split.second);
  row.set("abs_err_plus", std::fabs(exact.e_plus - cls.upper_energy));
  row.set("abs_err_minus", std::fabs(exact.e_minus - cls.lower_energy));
  row.set("abs_err_plus_hw", std::fabs(exact.e_plus - cls.upper_energy) / quantum);
  row.set("abs_err_minus_hw", std::fabs(exact.e_minus - cls.lower_energy) / quantum);
  row.set("rel_err_gap_exact", relative(exact.delta_e, cls.gap));
  row.set("rel_err_gap_tls", relative(std::hypot(d_eps, delta), cls.gap));

  const auto tag = [&](const EnergyDecomposition& d, const char* side) {
    const double nu = side[0] == 'l' ? d.nu_l : d.nu_r;
    return std::string(to_string(wkb_detail::classify(nu, exact.action)));
  };
  row.set("validity_left_plus", tag(exact.decomposition_plus, "l"));
  row.set("validity_right_plus", tag(exact.decomposition_plus, "r"));
  row.set("validity_left_minus", tag(exact.decomposition_minus, "l"));
  row.set("validity_right_minus", tag(exact.decomposition_minus, "r"));

  // Anchor each state in its dominant well.
  const Branch upper_branch = d_eps >= 0.0 ? Branch::left_anchored : Branch::right_anchored;
  const Branch lower_branch = d_eps >= 0.0 ? Branch::right_anchored : Branch::left_anchored;
  const auto localization = [&](const char* key, double energy, Branch branch, std::pair<double, double> split) {
    try {
      const LocalizationReport rep = localization_report(potential, energy, branch);
      row.set(std::string("ratio_r_") + key, rep.ratio_r);
      row.set(std::string("ratio_p_") + key + "_oracle", split.first / split.second);
      row.set(std::string("branch_") + key, to_string(branch));
    } catch (const Error& e) {
      row.note(std::string("localization ") + key + ": " + e.what());
    }
  };
  localization("upper", exact.e_plus, upper_branch, cls.upper_split);
  localization("lower", exact.e_minus, lower_branch, cls.lower_split);
  return row;
}

inline Report cmd_spectrum(const RunConfig& cfg, const RunOptions& opts = {}) {
  commands_detail::Stopwatch total;
  const DoubleWellPotential potential = make_potential(cfg);
  const SpectrumResult spectrum = oracle_for(potential, cfg);
  Report report{"spectrum", cfg.source, {}};
  for (const auto& [nl, nr] : cfg.levels) {
    commands_detail::Stopwatch watch;
    Row row;
    row.set("experiment_id", "spectrum/" + std::to_string(nl) + "-" + std::to_string(nr));
    for (auto& cell : level_row(potential, spectrum, nl, nr).cells) row.set(cell.first, std::move(cell.second));
    for (const auto& w : potential.warnings()) row.note(w);
    if (opts.timings) row.set("time_ms", watch.ms());
    report.rows.push_back(std::move(row));
  }
  if (opts.timings && !report.rows.empty()) report.rows.front().set("total_time_ms", total.ms());
  return report;
}

/// One row per (sweep point, level pair); failures are recorded in-row and the run continues.
inline Report cmd_sweep(const RunConfig& cfg, const RunOptions& opts = {}) {
  if (!cfg.sweep) fail(ErrorKind::config, "sweep: config has no sweep block");
  const SweepSpec sweep = *cfg.sweep;
  with_parameter(cfg.source, sweep.parameter, sweep.from);
  std::vector<std::vector<Row>> results(sweep.steps);
  auto run_point = [&](int i) {
    commands_detail::Stopwatch watch;
    const double value = sweep.value(i);
    auto base = [&]() {
      Row row;
      row.set("index", i);
      row.set("parameter", sweep.parameter);
      row.set("value", value);
      return row;
    };
    std::vector<Row> rows;
    try {
      json doc = with_parameter(cfg.source, sweep.parameter, value);
      doc.erase("sweep");
      const RunConfig point = parse_config(doc, cfg.base_dir);
      const DoubleWellPotential potential = make_potential(point);
      const SpectrumResult spectrum = oracle_for(potential, point);
      for (const auto& [nl, nr] : point.levels) {
        Row row = base();
        row.set("experiment_id", "sweep/" + std::to_string(i) + "/" + std::to_string(nl) + "-" + std::to_string(nr));
        try {
          for (auto& cell : level_row(potential, spectrum, nl, nr).cells) row.set(cell.first, std::move(cell.second));
        } catch (const Error& e) {
          row.set("n_l", nl);
          row.set("n_r", nr);
          row.set("error_kind", std::string(to_string(e.kind())));
          row.set("error", std::string(e.what()));
        }
        rows.push_back(std::move(row));
      }
    } catch (const Error& e) {
      Row row = base();
      row.set("experiment_id", "sweep/" + std::to_string(i));
      row.set("error_kind", std::string(to_string(e.kind())));
      row.set("error", std::string(e.what()));
      rows.push_back(std::move(row));
    }
    if (opts.timings) {
      for (Row& r : rows) r.set("time_ms", watch.ms());
    }
    results[i] = std::move(rows);
  };
  const int jobs = std::clamp(opts.jobs, 1, std::max(1, sweep.steps));
  if (jobs == 1) {
    for (int i = 0; i < sweep.steps; ++i) run_point(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&]() {
        for (int i = next++; i < sweep.steps; i = next++) run_point(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  Report report{"sweep", cfg.source, {}};
  for (auto& rows : results) {
    for (auto& r : rows) report.rows.push_back(std::move(r));
  }
  return report;
}

inline Report cmd_pcf(double nu, double z) {
  using commands_detail::relative;
  Report report{"pcf", json{{"nu", nu}, {"z", z}}, {}};
  const PcfEvaluation d = pcf_d(nu, z);
  Row row;
  row.set("nu", nu);
  row.set("z", z);
  row.set("value", d.value);
  row.set("derivative", d.derivative);
  row.set("abs_error_estimate", d.abs_error_estimate);
  row.set("regime", to_string(d.regime));
  if (std::fabs(z) <= 15.0) {
    const PcfEvaluation o = pcf_d_ode(nu, z);
    row.set("ode_value", o.value);
    row.set("ode_rel_diff", relative(d.value, o.value));
  }
  if (z <= -std::max(6.0, 3.0 * std::sqrt(2.0 * nu + 1.0))) {
    const PcfEvaluation printed = pcf_d_asymptotic(nu, z, AsymptoticOrder::printed);
    const PcfEvaluation optimal = pcf_d_asymptotic(nu, z, AsymptoticOrder::optimal);
    row.set("asymptotic_printed", printed.value);
    row.set("asymptotic_printed_rel_diff", relative(printed.value, d.value));
    row.set("asymptotic_optimal", optimal.value);
    row.set("asymptotic_optimal_rel_diff", relative(optimal.value, d.value));
  }
  report.rows.push_back(std::move(row));
  return report;
}

inline Report cmd_export_potential(const RunConfig& cfg) {
  const DoubleWellPotential potential = make_potential(cfg);
  const GridSpec grid = cfg.grid.resolve(potential);
  Report report{"export-potential", cfg.source, {}};
  report.rows.reserve(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    const double x = grid.x(i);
    const ValueSlope vs = potential.eval(x);
    Row row;
    row.set("x", x);
    row.set("v", vs.value);
    row.set("dv", vs.slope);
    report.rows.push_back(std::move(row));
  }
  return report;
}

struct VerifyOutcome {
  Report report;
  bool passed = true;
};

namespace commands_detail {

inline void add_check(Report& report, bool& passed, const std::string& check, int n_l, int n_r, double observed,
                      double threshold, const std::string& detail = {}) {
  Row row;
  row.set("check", check);
  row.set("n_l", n_l);
  row.set("n_r", n_r);
  row.set("observed", observed);
  row.set("threshold", threshold);
  const bool ok = std::isfinite(observed) && observed <= threshold;
  row.set("status", ok ? "pass" : "fail");
  row.set("detail", detail);
  passed = passed && ok;
  report.rows.push_back(std::move(row));
}

inline void add_skip(Report& report, const std::string& check, int n_l, int n_r, const std::string& reason) {
  Row row;
  row.set("check", check);
  row.set("n_l", n_l);
  row.set("n_r", n_r);
  row.set("observed", Cell{});
  row.set("threshold", Cell{});
  row.set("status", "skipped");
  row.set("detail", reason);
  report.rows.push_back(std::move(row));
}

/// Five anchors spanning +-20% of the barrier width at (eps_L + eps_R)/2, centred on the default c.
inline std::vector<double> c_choices(const DoubleWellPotential& potential, int n_l, int n_r) {
  const UnitsConfig& u = potential.units();
  const double e = 0.5 * (epsilon_level(potential.left(), n_l, u) + epsilon_level(potential.right(), n_r, u));
  const TurningPair tp = turning_points(potential, e);
  const double width = tp.a_nu_r - tp.a_nu_l;
  std::vector<double> out;
  for (double f : {-0.2, -0.1, 0.0, 0.1, 0.2}) out.push_back(potential.c() + f * width);
  return out;
}

}  // namespace commands_detail

/// Invariant suite against the configured potential; passed iff no check fails.
inline VerifyOutcome cmd_verify(const RunConfig& cfg) {
  using namespace commands_detail;
  const DoubleWellPotential potential = make_potential(cfg);
  const SpectrumResult spectrum = oracle_for(potential, cfg);
  const UnitsConfig& u = potential.units();
  const double quantum = potential.min_quantum();
  VerifyOutcome out{Report{"verify", cfg.source, {}}, true};
  Report& rep = out.report;
  bool& ok = out.passed;
  for (const auto& [nl, nr] : cfg.levels) {
    const double eps_l = epsilon_level(potential.left(), nl, u);
    const double eps_r = epsilon_level(potential.right(), nr, u);
    PairSolution exact;
    PairSolution quad;
    double delta = 0.0;
    try {
      delta = splitting_degenerate(potential, nl, nr);
      exact = solve_pair_exact(potential, nl, nr);
      quad = solve_pair_quadratic(potential, nl, nr);
    } catch (const Error& e) {
      add_check(rep, ok, "semiclassical_solve", nl, nr, std::nan(""), 0.0, e.what());
      continue;
    }

    add_check(rep, ok, "tilde_delta_identity", nl, nr, relative(tilde_delta(potential, nl, nr, potential.c()), delta),
              1e-12, "relative difference of tilde Delta and Delta");

    const std::vector<double> cs = c_choices(potential, nl, nr);
    double c_shift = 0.0;
    double flux_dev = 0.0;
    const double tilde_ref = tilde_delta(potential, nl, nr, potential.c());
    const WkbTails tails = wkb_tails(potential, nl, nr, potential.c());
    try {
      for (double c : cs) {
        const DoubleWellPotential moved = potential.with_c(c);
        const PairSolution s = solve_pair_exact(moved, nl, nr);
        c_shift = std::max({c_shift, relative(s.e_plus, exact.e_plus), relative(s.e_minus, exact.e_minus)});
        c_shift = std::max(c_shift, relative(tilde_delta(potential, nl, nr, c), tilde_ref));
        for (Branch b : {Branch::left_anchored, Branch::right_anchored}) {
          try {
            const double base = amplitude_ratio(potential, exact.e_plus, b).ratio;
            c_shift = std::max(c_shift, relative(amplitude_ratio(moved, exact.e_plus, b).ratio, base));
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::singular_input) throw;
          }
        }
        flux_dev = std::max(flux_dev, relative(flux_splitting(tails.left, tails.right, c, nr, u), tilde_ref));
      }
      add_check(rep, ok, "c_invariance", nl, nr, c_shift, 1e-9, "max relative change of E_+-, tilde Delta, C_L/C_R over 5 anchors");
      add_check(rep, ok, "flux_consistency", nl, nr, flux_dev, 1e-9, "Wronskian of WKB tails vs tilde Delta over 5 points");
    } catch (const Error& e) {
      add_check(rep, ok, "c_invariance", nl, nr, std::nan(""), 1e-9, e.what());
    }

    add_check(rep, ok, "sum_rule_exact", nl, nr, std::fabs(exact.e_plus + exact.e_minus - eps_l - eps_r) / quantum, 1e-6,
              "|E_+ + E_- - eps_L - eps_R| in units of hbar*omega");
    add_check(rep, ok, "sum_rule_quadratic", nl, nr, std::fabs(quad.e_plus + quad.e_minus - eps_l - eps_r) / quantum,
              1e-6, "|E_+ + E_- - eps_L - eps_R| in units of hbar*omega");

    const PairClassification cls = resolve_pair_or_single(spectrum, potential, nl, nr);
    const double oracle_err =
        std::max(spectrum.error_estimates[cls.lower_index], spectrum.error_estimates[cls.upper_index]);
    add_check(rep, ok, "oracle_error", nl, nr, oracle_err / quantum, 1e-8,
              "oracle eigenvalue error estimate in units of hbar*omega");
    const double placement =
        std::max(std::fabs(exact.e_plus - cls.upper_energy), std::fabs(exact.e_minus - cls.lower_energy)) / quantum;
    add_check(rep, ok, "eigenvalue_placement", nl, nr, placement, 0.05, "|E_semi - E_oracle| in units of hbar*omega");
    if (cls.gap > 100.0 * oracle_err) {
      add_check(rep, ok, "splitting_vs_oracle", nl, nr, relative(exact.delta_e, cls.gap), 0.15,
                "relative difference of E_+ - E_- and the oracle gap");
    } else {
      add_skip(rep, "splitting_vs_oracle", nl, nr, "oracle gap not resolved above its error estimate");
    }
  }
  return out;
}

}  // namespace asymwell::app

#endif  // ASYMWELL_APP_COMMANDS_HPP

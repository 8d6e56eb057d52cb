#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "asymwell/app/commands.hpp"
#include "asymwell/app/config.hpp"

namespace {

using asymwell::ErrorKind;
using asymwell::fail;
namespace app = asymwell::app;

struct Overrides {
  std::string config_path;
  std::optional<std::string> output;
  std::optional<std::string> format;
  std::optional<double> c_override;
  std::optional<int> n_points;
};

app::RunConfig resolve_config(const Overrides& o) {
  std::string path = o.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("ASYMWELL_CONFIG")) path = env;
  }
  if (path.empty()) fail(ErrorKind::config, "no config given (use --config or set ASYMWELL_CONFIG)");
  app::json doc = app::read_json_file(path);
  if (!doc.is_object()) fail(ErrorKind::config, "config: expected an object");
  if (o.output) doc["output"]["path"] = *o.output;
  if (o.format) doc["output"]["format"] = *o.format;
  if (o.c_override) doc["c_override"] = *o.c_override;
  if (o.n_points) doc["grid"]["n_points"] = *o.n_points;
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  return app::parse_config(doc, parent.empty() ? "." : parent);
}

void emit(const app::Report& report, const std::string& format, const std::string& path) {
  if (path.empty() || path == "-") {
    app::write_report(std::cout, report, format);
    return;
  }
  std::ofstream out(path);
  if (!out) fail(ErrorKind::config, "output.path: cannot open '" + path + "' for writing");
  app::write_report(out, report, format);
}

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_path, "Config file (falls back to ASYMWELL_CONFIG)");
  cmd->add_option("-o,--output", o.output, "Output path, '-' for stdout (overrides output.path)");
  cmd->add_option("-f,--format", o.format, "csv or json (overrides output.format)")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--c-override", o.c_override, "Matching point c (overrides c_override)");
  cmd->add_option("--n-points", o.n_points, "Oracle grid points (overrides grid.n_points)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Spectra of asymmetric double wells by parabolic-cylinder/WKB matching, checked against a grid oracle"};
  cli.require_subcommand(1);
  Overrides o;
  app::RunOptions run;

  auto* spectrum = cli.add_subcommand("spectrum", "Semiclassical vs oracle table per level pair");
  add_common(spectrum, o);
  spectrum->add_flag("--timings", run.timings, "Append wall-clock timings");

  auto* sweep = cli.add_subcommand("sweep", "Series over the config's sweep block");
  add_common(sweep, o);
  sweep->add_option("-j,--jobs", run.jobs, "Parallel sweep points (results stay index-ordered)")->check(CLI::PositiveNumber);
  sweep->add_flag("--timings", run.timings, "Append wall-clock timings");

  auto* verify = cli.add_subcommand("verify", "Invariant suite; exit 1 if any check fails");
  add_common(verify, o);

  auto* export_potential = cli.add_subcommand("export-potential", "Tabulate V(x) and V'(x) on the oracle grid");
  add_common(export_potential, o);

  double nu = 0.0;
  double z = 0.0;
  std::string pcf_format = "csv";
  std::string pcf_output = "-";
  auto* pcf = cli.add_subcommand("pcf", "Spot evaluation of D_nu(z)");
  pcf->add_option("--nu", nu, "Order")->required();
  pcf->add_option("--z", z, "Argument")->required()->allow_extra_args(false);
  pcf->add_option("-f,--format", pcf_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  pcf->add_option("-o,--output", pcf_output, "Output path, '-' for stdout");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : app::exit_config;
  }

  try {
    if (pcf->parsed()) {
      emit(app::cmd_pcf(nu, z), pcf_format, pcf_output);
      return app::exit_ok;
    }
    const app::RunConfig cfg = resolve_config(o);
    if (spectrum->parsed()) {
      emit(app::cmd_spectrum(cfg, run), cfg.output.format, cfg.output.path);
    } else if (sweep->parsed()) {
      emit(app::cmd_sweep(cfg, run), cfg.output.format, cfg.output.path);
    } else if (export_potential->parsed()) {
      emit(app::cmd_export_potential(cfg), cfg.output.format, cfg.output.path);
    } else if (verify->parsed()) {
      const app::VerifyOutcome outcome = app::cmd_verify(cfg);
      emit(outcome.report, cfg.output.format, cfg.output.path);
      if (!outcome.passed) {
        for (const auto& row : outcome.report.rows) {
          if (row.text("status") == "fail") {
            std::cerr << "FAIL " << row.text("check") << " (" << row.number("n_l") << "," << row.number("n_r")
                      << "): observed " << row.number("observed") << " > threshold " << row.number("threshold")
                      << (row.text("detail").empty() ? "" : " [" + row.text("detail") + "]") << "\n";
          }
        }
        return app::exit_verify_failed;
      }
    }
    return app::exit_ok;
  } catch (const asymwell::Error& e) {
    std::cerr << app::error_json(e.kind(), e.what()) << "\n";
    return app::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << app::error_json(ErrorKind::internal, e.what()) << "\n";
    return app::exit_numeric;
  }
}

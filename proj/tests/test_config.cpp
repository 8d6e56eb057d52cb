#include <cmath>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "asymwell/app/config.hpp"

namespace {

using namespace asymwell;
using app::json;

const std::filesystem::path config_dir = ASYMWELL_CONFIG_DIR;

json base_doc() {
  return json::parse(R"({
    "units": {"hbar": 1.0, "mass": 1.0},
    "potential": {"family": "piecewise_parabolic",
      "params": {"left": {"a": -3, "omega": 1.0, "v_min": 0.0, "extent": 2},
                 "right": {"a": 3, "omega": 1.0, "v_min": 0.0, "extent": 2},
                 "barrier_height": 3}},
    "levels": [[0, 0]]
  })");
}

std::string config_error(const json& doc) {
  try {
    app::parse_config(doc);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config);
    return e.what();
  }
  return "";
}

TEST(Config, ParsesDefaults) {
  const app::RunConfig cfg = app::parse_config(base_doc());
  EXPECT_EQ(cfg.potential.family, "piecewise_parabolic");
  EXPECT_EQ(cfg.levels.size(), 1u);
  EXPECT_EQ(cfg.grid.n_points, 8001);
  EXPECT_EQ(cfg.output.format, "csv");
  EXPECT_EQ(cfg.output.path, "-");
  EXPECT_FALSE(cfg.c_override.has_value());
  EXPECT_FALSE(cfg.sweep.has_value());
  EXPECT_EQ(cfg.oracle.scheme, Discretization::numerov_corrected);
}

TEST(Config, ShippedConfigsParse) {
  for (const char* name : {"default.json", "piecewise_shallow.json", "coarse_grid.json", "no_barrier.json",
                           "bias_sweep.json", "quartic.json", "tabulated.json"}) {
    EXPECT_NO_THROW(app::load_config(config_dir / name)) << name;
  }
  const app::RunConfig sweep = app::load_config(config_dir / "bias_sweep.json");
  ASSERT_TRUE(sweep.sweep.has_value());
  EXPECT_EQ(sweep.sweep->steps, 21);
  EXPECT_NEAR(sweep.sweep->value(20), 0.0126, 1e-15);
}

TEST(Config, UnknownKeyIsRejectedWithPath) {
  json doc = base_doc();
  doc["potential"]["params"]["left"]["omgea"] = 1.0;
  EXPECT_NE(config_error(doc).find("potential.params.left.omgea"), std::string::npos);
  doc = base_doc();
  doc["extra"] = 1;
  EXPECT_NE(config_error(doc).find("extra: unknown key"), std::string::npos);
}

TEST(Config, MissingFieldNamesItsPath) {
  json doc = base_doc();
  doc["potential"]["params"]["left"].erase("omega");
  const std::string msg = config_error(doc);
  EXPECT_NE(msg.find("potential.params.left.omega"), std::string::npos) << msg;
  EXPECT_NE(msg.find("missing"), std::string::npos) << msg;
}

TEST(Config, ValueValidation) {
  json doc = base_doc();
  doc["levels"] = json::parse("[[0, 7]]");
  EXPECT_NE(config_error(doc).find("levels[0]"), std::string::npos);
  doc = base_doc();
  doc["levels"] = json::parse("[[0.5, 1]]");
  EXPECT_NE(config_error(doc).find("levels[0]"), std::string::npos);
  doc = base_doc();
  doc["units"]["hbar"] = -1.0;
  EXPECT_NE(config_error(doc).find("units.hbar"), std::string::npos);
  doc = base_doc();
  doc["grid"] = json::parse(R"({"x_lo": -5})");
  EXPECT_NE(config_error(doc).find("grid.x_hi"), std::string::npos);
  doc = base_doc();
  doc["grid"] = json::parse(R"({"n_points": 100})");
  EXPECT_NE(config_error(doc).find("grid.n_points"), std::string::npos);
  doc = base_doc();
  doc["output"] = json::parse(R"({"format": "xml"})");
  EXPECT_NE(config_error(doc).find("output.format"), std::string::npos);
  doc = base_doc();
  doc["oracle"] = json::parse(R"({"scheme": "spectral"})");
  EXPECT_NE(config_error(doc).find("oracle.scheme"), std::string::npos);
  doc = base_doc();
  doc["potential"]["family"] = "cosine";
  EXPECT_NE(config_error(doc).find("potential.family"), std::string::npos);
}

TEST(Config, WithParameterReplacesNumericField) {
  const json doc = app::with_parameter(base_doc(), "potential.params.left.v_min", 0.25);
  EXPECT_DOUBLE_EQ(doc["potential"]["params"]["left"]["v_min"].get<double>(), 0.25);
  EXPECT_DOUBLE_EQ(base_doc()["potential"]["params"]["left"]["v_min"].get<double>(), 0.0);
  try {
    app::with_parameter(base_doc(), "potential.params.left.missing", 1.0);
    FAIL() << "expected a config error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config);
  }
  EXPECT_THROW(app::with_parameter(base_doc(), "potential.family", 1.0), Error);
}

TEST(Config, MakePotentialForEachFamily) {
  const auto piecewise = app::make_potential(app::parse_config(base_doc()));
  EXPECT_EQ(piecewise.family(), "piecewise_parabolic");
  EXPECT_DOUBLE_EQ(piecewise.top().v_top, 3.0);

  const auto quartic = app::make_potential(app::load_config(config_dir / "quartic.json"));
  EXPECT_EQ(quartic.family(), "biased_quartic");
  EXPECT_NEAR(quartic.right().a, 4.5, 1e-9);

  const auto table = app::make_potential(app::load_config(config_dir / "tabulated.json"));
  EXPECT_EQ(table.family(), "tabulated");
  EXPECT_NEAR(table.top().v_top, 4.5 * 4.5 * 4.5 * 4.5 / 162.0, 1e-3);
}

TEST(Config, MatchingPointOverrideIsApplied) {
  json doc = base_doc();
  doc["c_override"] = 0.4;
  EXPECT_DOUBLE_EQ(app::make_potential(app::parse_config(doc)).c(), 0.4);
  doc["c_override"] = 3.5;
  try {
    app::make_potential(app::parse_config(doc));
    FAIL() << "expected a domain error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain);
  }
}

TEST(Config, NoBarrierConfigFailsAtConstruction) {
  try {
    app::make_potential(app::load_config(config_dir / "no_barrier.json"));
    FAIL() << "expected a construction error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::construction);
  }
}

TEST(Config, MissingTableFileIsAConfigError) {
  json doc = base_doc();
  doc["potential"] = json::parse(R"({"family": "tabulated", "params": {"csv": "does_not_exist.csv"}})");
  try {
    app::make_potential(app::parse_config(doc, config_dir));
    FAIL() << "expected a config error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config);
  }
}

}  // namespace

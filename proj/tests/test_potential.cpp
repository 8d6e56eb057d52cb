#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "asymwell/potential.hpp"

namespace {

using namespace asymwell;

const UnitsConfig units{1.0, 1.0};

DoubleWellPotential symmetric_piecewise(double a = 3.0, double d = 2.0, double h = 3.0) {
  return build_piecewise_parabolic(WellParams::make(-a, 1.0, 0.0, d, units), WellParams::make(a, 1.0, 0.0, d, units),
                                   {d, d}, h, units);
}

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::internal;
}

TEST(Potential, PiecewiseReproducesItsWells) {
  const auto pot = build_piecewise_parabolic(WellParams::make(-3.0, 1.2, 0.1, 2.0, units),
                                             WellParams::make(3.5, 0.8, -0.05, 2.5, units), {2.0, 2.5}, 4.0, units);
  EXPECT_EQ(pot.family(), "piecewise_parabolic");
  for (double x : {-4.5, -3.0, -1.2}) {
    EXPECT_NEAR(pot.value(x), 0.1 + 0.5 * 1.44 * (x + 3.0) * (x + 3.0), 1e-14);
  }
  EXPECT_NEAR(pot.value(2.0), -0.05 + 0.5 * 0.64 * 2.25, 1e-14);
  EXPECT_DOUBLE_EQ(pot.top().v_top, 4.0);
  EXPECT_NEAR(pot.value(pot.top().x_top), 4.0, 1e-14);
  EXPECT_NEAR(pot.slope(pot.top().x_top), 0.0, 1e-12);
}

TEST(Potential, PiecewiseIsContinuouslyDifferentiableAtJoins) {
  const auto pot = symmetric_piecewise();
  for (double x : pot.breakpoints()) {
    const double h = 1e-7;
    EXPECT_NEAR(pot.value(x - h), pot.value(x + h), 1e-6);
    EXPECT_NEAR(pot.slope(x - h), pot.slope(x + h), 1e-5);
  }
}

TEST(Potential, PiecewiseCapIsMonotoneForSteepJoins) {
  const auto pot = symmetric_piecewise(5.0, 3.0, 6.0);
  const double x0 = -5.0 + 3.0;
  double prev = pot.value(x0);
  for (int i = 1; i <= 400; ++i) {
    const double x = x0 + (pot.top().x_top - x0) * i / 400.0;
    const double v = pot.value(x);
    EXPECT_GE(v, prev - 1e-13);
    prev = v;
  }
}

TEST(Potential, LocateWellsRoundTripsPiecewiseParameters) {
  const auto pot = build_piecewise_parabolic(WellParams::make(-3.0, 1.0, 0.0, 3.0, units),
                                             WellParams::make(4.0, 1.5, 0.2, 2.0, units), {3.0, 2.0}, 6.0, units);
  const auto [l, r] = locate_wells(pot);
  EXPECT_NEAR(l.a, -3.0, 1e-9);
  EXPECT_NEAR(r.a, 4.0, 1e-9);
  EXPECT_NEAR(l.omega, 1.0, 1e-8);
  EXPECT_NEAR(r.omega, 1.5, 1e-8);
  EXPECT_NEAR(l.v_min, 0.0, 1e-12);
  EXPECT_NEAR(r.v_min, 0.2, 1e-12);
  EXPECT_NEAR(l.parabolic_extent, 3.0, 1e-3);
  EXPECT_NEAR(r.parabolic_extent, 2.0, 1e-3);
}

TEST(Potential, BiasedQuarticMinimaAndCurvatures) {
  // Roots of V' = 4kx(x^2 - a^2) + b found independently at 30 digits.
  const auto pot = build_biased_quartic(4.0, 1.0 / 128.0, 0.01, units);
  EXPECT_NEAR(pot.left().a, -4.0099627479677873, 1e-9);
  EXPECT_NEAR(pot.right().a, 3.9899622479302836, 1e-9);
  EXPECT_NEAR(pot.left().v_min, -0.040049875620929428, 1e-12);
  EXPECT_NEAR(pot.right().v_min, 0.039949874370866923, 1e-12);
  EXPECT_NEAR(pot.left().omega, 1.0037337128234651, 1e-8);
  EXPECT_NEAR(pot.right().omega, 0.99623347256878377, 1e-8);
  EXPECT_NEAR(pot.top().x_top, 0.02000050003750375, 1e-8);
  EXPECT_NEAR(pot.top().v_top, 2.0001000012500625, 1e-12);
}

TEST(Potential, ShallowBarrierEmitsWarning) {
  const auto pot = build_biased_quartic(4.0, 1.0 / 128.0, 0.01, units);
  ASSERT_FALSE(pot.warnings().empty());
  const auto deep = symmetric_piecewise(4.0, 3.0, 5.0);
  EXPECT_TRUE(deep.warnings().empty());
}

TEST(Potential, QuarticCertifiedExtentShrinksWithTolerance) {
  const auto tight = build_biased_quartic(4.0, 1.0 / 128.0, 0.0, units, {1e-9});
  const auto loose = build_biased_quartic(4.0, 1.0 / 128.0, 0.0, units, {1e-3});
  EXPECT_GT(tight.left().parabolic_extent, 0.0);
  EXPECT_LT(tight.left().parabolic_extent, loose.left().parabolic_extent);
}

TEST(Potential, TurningPointsInsideParabolicRegion) {
  const auto pot = symmetric_piecewise();
  const TurningPair tp = turning_points(pot, 0.5);
  EXPECT_NEAR(tp.a_nu_l, -2.0, 1e-12);
  EXPECT_NEAR(tp.a_nu_r, 2.0, 1e-12);
  const auto [lo, hi] = outer_turning_points(pot, 0.5);
  EXPECT_NEAR(lo, -4.0, 1e-12);
  EXPECT_NEAR(hi, 4.0, 1e-12);
}

TEST(Potential, TurningPointErrors) {
  const auto pot = symmetric_piecewise();
  EXPECT_EQ(kind_of([&] { turning_points(pot, 3.5); }), ErrorKind::no_barrier);
  EXPECT_EQ(kind_of([&] { turning_points(pot, -0.1); }), ErrorKind::domain);
}

TEST(Potential, ConstructionErrors) {
  EXPECT_EQ(kind_of([] { symmetric_piecewise(3.0, 2.0, 1.5); }), ErrorKind::construction);
  EXPECT_EQ(kind_of([] { symmetric_piecewise(3.0, 3.5, 10.0); }), ErrorKind::construction);
  EXPECT_EQ(kind_of([] { build_biased_quartic(1.0, 1.0, 1.6, units); }), ErrorKind::construction);
  EXPECT_EQ(kind_of([] { WellParams::make(0.0, -1.0, 0.0, 1.0, units); }), ErrorKind::construction);
  EXPECT_EQ(kind_of([] { UnitsConfig{0.0, 1.0}.validate(); }), ErrorKind::config);
}

TEST(Potential, MatchingPointValidation) {
  const auto pot = symmetric_piecewise();
  EXPECT_NEAR(pot.with_c(0.5).c(), 0.5, 0.0);
  EXPECT_EQ(kind_of([&] { pot.with_c(-3.5); }), ErrorKind::domain);
  EXPECT_EQ(kind_of([&] { pot.with_c(5.0); }), ErrorKind::domain);
}

TEST(Potential, DomainLeavesForbiddenMargin) {
  const auto pot = symmetric_piecewise();
  EXPECT_GE(pot.value(pot.domain().lo), pot.top().v_top + 10.0);
  EXPECT_GE(pot.value(pot.domain().hi), pot.top().v_top + 10.0);
  EXPECT_GE(pot.right().a - pot.left().a, 0.0);
  EXPECT_GE(pot.domain().hi - pot.right().a, 12.0 * pot.right().l);
}

TEST(Potential, TabulatedQuarticMatchesAnalyticMinima) {
  const double a = 4.0;
  const double k = 1.0 / 128.0;
  std::vector<double> xs;
  std::vector<double> vs;
  for (int i = 0; i <= 4000; ++i) {
    const double x = -12.0 + 24.0 * i / 4000.0;
    xs.push_back(x);
    vs.push_back(k * (x * x - a * a) * (x * x - a * a));
  }
  const auto pot = build_tabulated(xs, vs, units, {1e-6});
  EXPECT_EQ(pot.family(), "tabulated");
  EXPECT_NEAR(pot.left().a, -4.0, 1e-6);
  EXPECT_NEAR(pot.right().a, 4.0, 1e-6);
  EXPECT_NEAR(pot.left().omega, 1.0, 1e-4);
  EXPECT_NEAR(pot.top().v_top, 2.0, 1e-6);
}

TEST(Potential, TabulatedSingleWellIsAShapeError) {
  std::vector<double> xs;
  std::vector<double> vs;
  for (int i = 0; i <= 400; ++i) {
    const double x = -10.0 + 20.0 * i / 400.0;
    xs.push_back(x);
    vs.push_back(0.5 * x * x);
  }
  EXPECT_EQ(kind_of([&] { build_tabulated(xs, vs, units); }), ErrorKind::shape);
}

}  // namespace

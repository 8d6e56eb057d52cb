#include <cmath>

#include <gtest/gtest.h>

#include "asymwell/numerics.hpp"
#include "asymwell/potential.hpp"
#include "asymwell/quantize.hpp"
#include "asymwell/specfun.hpp"

namespace {

using namespace asymwell;

const UnitsConfig units{1.0, 1.0};

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::internal;
}

DoubleWellPotential piecewise(double a, double d, double h, double v_left = 0.0, double v_right = 0.0,
                              double omega_right = 1.0) {
  return build_piecewise_parabolic(WellParams::make(-a, 1.0, v_left, d, units),
                                   WellParams::make(a, omega_right, v_right, d, units), {d, d}, h, units);
}

DoubleWellPotential quartic(double a) { return build_biased_quartic(a, 1.0 / (8.0 * a * a), 0.0, units); }

TEST(Quantize, LevelEnergies) {
  const WellParams w = WellParams::make(1.0, 1.3, -0.2, 1.0, units);
  EXPECT_NEAR(epsilon_level(w, 2, units), -0.2 + 2.5 * 1.3, 1e-15);
  EXPECT_NEAR(nu_of_energy(w, epsilon_level(w, 3, units), units), 3.0, 1e-14);
}

TEST(Quantize, DegenerateSplittingClosedForm) {
  // g_n e^{-S} / pi with S from 30-digit quadrature.
  EXPECT_NEAR(splitting_degenerate(quartic(4.0), 0, 0) / 2.1777948374250546e-4, 1.0, 1e-10);
  EXPECT_NEAR(splitting_degenerate(quartic(4.5), 0, 0) / 1.4333256942357757e-5, 1.0, 1e-10);
  EXPECT_NEAR(splitting_degenerate(quartic(4.5), 1, 1) / 2.7185636232781293e-3, 1.0, 1e-10);
  EXPECT_NEAR(splitting_degenerate(piecewise(3.0, 2.0, 3.0), 0, 0), 6.2835364e-4, 1e-10);
}

TEST(Quantize, DegenerateSplittingRequiresDegeneracy) {
  const auto pot = piecewise(3.0, 2.0, 3.0, 0.3);
  EXPECT_EQ(kind_of([&] { splitting_degenerate(pot, 0, 0); }), ErrorKind::precondition);
}

TEST(Quantize, ExactRootsSatisfyQuantizationCondition) {
  const auto pot = piecewise(3.0, 2.0, 3.0, 0.0004);
  const PairSolution s = solve_pair_exact(pot, 0, 0);
  EXPECT_EQ(s.method, SolveMethod::root_exact);
  const double rhs = 0.25 * g_factor(0.0) * g_factor(0.0) * std::exp(-2.0 * s.action);
  EXPECT_LT(std::fabs(quantization_residual(pot, s.e_plus)), 1e-9 * rhs);
  EXPECT_LT(std::fabs(quantization_residual(pot, s.e_minus)), 1e-9 * rhs);
  EXPECT_GT(s.e_plus, s.e_minus);
  EXPECT_NEAR(s.delta_e, s.e_plus - s.e_minus, 1e-15);
}

TEST(Quantize, SymmetricPairFrozenValues) {
  const auto pot = piecewise(3.0, 2.0, 3.0);
  const PairSolution exact = solve_pair_exact(pot, 0, 0);
  EXPECT_NEAR(exact.action, 6.30004248403963, 1e-10);
  EXPECT_NEAR(exact.delta_split, 6.2835364e-4, 1e-10);
  EXPECT_NEAR(exact.delta_e, 6.2835451e-4, 1e-10);
  const PairSolution quad = solve_pair_quadratic(pot, 0, 0);
  EXPECT_EQ(quad.method, SolveMethod::quadratic_approx);
  EXPECT_NEAR(quad.delta_e, quad.delta_split, 1e-15);
}

TEST(Quantize, SumRuleBothMethods) {
  for (double bias : {0.0, 3e-4, -1e-3, 5e-3}) {
    const auto pot = piecewise(4.0, 3.0, 5.0, bias);
    const double eps_sum = 1.0 + bias;
    const PairSolution exact = solve_pair_exact(pot, 0, 0);
    const PairSolution quad = solve_pair_quadratic(pot, 0, 0);
    EXPECT_NEAR(exact.e_plus + exact.e_minus, eps_sum, 1e-6) << "bias=" << bias;
    EXPECT_NEAR(quad.e_plus + quad.e_minus, eps_sum, 1e-12) << "bias=" << bias;
  }
}

TEST(Quantize, GeneralizedSplittingUnderBias) {
  const auto pot = piecewise(4.0, 3.0, 5.0, 2e-6);
  const double delta = splitting_degenerate(piecewise(4.0, 3.0, 5.0), 0, 0);
  const PairSolution quad = solve_pair_quadratic(pot, 0, 0);
  EXPECT_NEAR(quad.delta_e, std::hypot(2e-6, quad.delta_split), 1e-15);
  EXPECT_NEAR(quad.delta_split / delta, 1.0, 1e-5);
  const PairSolution exact = solve_pair_exact(pot, 0, 0);
  EXPECT_NEAR(exact.delta_e / quad.delta_e, 1.0, 1e-5);
}

TEST(Quantize, UnequalFrequenciesAtDegeneracy) {
  // eps_L = eps_R = 1/2 with omega_R / omega_L = 1.3.
  const auto pot = piecewise(4.0, 3.0, 8.0, 0.0, -0.15, 1.3);
  const PairSolution quad = solve_pair_quadratic(pot, 0, 0);
  const PairSolution exact = solve_pair_exact(pot, 0, 0);
  const double delta = splitting_degenerate(pot, 0, 0);
  EXPECT_NEAR(quad.delta_e / delta, 1.0, 1e-13);
  EXPECT_NEAR(exact.delta_e / delta, 1.0, 1e-4);
  EXPECT_NEAR(exact.decomposition_plus.nu_l - exact.decomposition_plus.n_l,
              1.3 * (exact.decomposition_plus.nu_r - exact.decomposition_plus.n_r), 1e-12);
}

TEST(Quantize, DecompositionIsConsistent) {
  const auto pot = piecewise(4.0, 3.0, 8.0, 0.01, 0.0, 1.1);
  const EnergyDecomposition d = decompose_energy(pot, 0.53, 0, 0);
  EXPECT_NEAR(d.energy, 0.53, 1e-15);
  EXPECT_NEAR(d.nu_l, nu_of_energy(pot.left(), 0.53, units), 1e-14);
  EXPECT_NEAR(d.nu_r, nu_of_energy(pot.right(), 0.53, units), 1e-14);
  EXPECT_NEAR(d.delta_eps, 0.01 + 0.5 - 0.55, 1e-15);
  EXPECT_NEAR(d.eps_l + d.delta_l + d.delta_nl, 0.53, 1e-14);
}

TEST(Quantize, ErrorPaths) {
  const auto far = piecewise(4.0, 3.0, 5.0, 0.3);
  EXPECT_EQ(kind_of([&] { solve_pair_exact(far, 0, 0); }), ErrorKind::near_degeneracy);
  EXPECT_EQ(kind_of([&] { solve_pair_quadratic(far, 0, 0); }), ErrorKind::near_degeneracy);
  const auto pot = piecewise(4.0, 3.0, 5.0);
  PairOptions narrow;
  narrow.window = 1e-9;
  EXPECT_EQ(kind_of([&] { solve_pair_exact(pot, 0, 0, narrow); }), ErrorKind::degeneracy_structure);
  EXPECT_EQ(kind_of([&] { quantization_residual(pot, 1.0); }), ErrorKind::singular_input);
  EXPECT_EQ(kind_of([&] { solve_pair_exact(pot, 5, 5); }), ErrorKind::no_barrier);
}

TEST(Quantize, LocalizationRatioAtSymmetricRoots) {
  const auto pot = piecewise(3.0, 2.0, 3.0);
  const PairSolution s = solve_pair_exact(pot, 0, 0);
  const LocalizationReport lr = localization_report(pot, s.e_plus, Branch::left_anchored);
  EXPECT_NEAR(lr.ratio_r, 1.0, 1e-5);
  EXPECT_NEAR(lr.amp_ratio_sq, 1.0, 1e-5);
  EXPECT_EQ(lr.branch, Branch::left_anchored);
}

TEST(Quantize, LocalizationFollowsTheLowerWell) {
  const auto pot = piecewise(3.0, 2.0, 3.0, 10.0 * 6.2835364e-4);
  const PairSolution s = solve_pair_exact(pot, 0, 0);
  const LocalizationReport lower = localization_report(pot, s.e_minus, Branch::right_anchored);
  const LocalizationReport upper = localization_report(pot, s.e_plus, Branch::left_anchored);
  EXPECT_LT(lower.ratio_r, 1e-2);
  EXPECT_GT(upper.ratio_r, 1e2);
  EXPECT_NEAR(std::log(lower.ratio_r) / std::log(1.0 / upper.ratio_r), 1.0, 0.1);
}

}  // namespace

#include <cmath>

#include <gtest/gtest.h>

#include "asymwell/numerics.hpp"
#include "asymwell/oracle.hpp"
#include "asymwell/potential.hpp"
#include "asymwell/quantize.hpp"
#include "asymwell/twolevel.hpp"

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

DoubleWellPotential piecewise(double a, double d, double h, double v_right = 0.0, double omega_right = 1.0) {
  return build_piecewise_parabolic(WellParams::make(-a, 1.0, 0.0, d, units),
                                   WellParams::make(a, omega_right, v_right, d, units), {d, d}, h, units);
}

struct Case {
  DoubleWellPotential pot;
  int n_l;
  int n_r;
};

std::vector<Case> cases() {
  return {
      {piecewise(3.0, 2.0, 3.0), 0, 0},
      {piecewise(4.0, 3.0, 5.0), 1, 1},
      {piecewise(4.0, 3.0, 8.0, -0.15, 1.3), 0, 0},
      {piecewise(4.0, 3.0, 5.0, -1.0), 0, 1},
      {build_biased_quartic(4.5, 1.0 / 162.0, 0.0, units), 0, 0},
  };
}

TEST(TwoLevel, TildeDeltaEqualsDelta) {
  for (const auto& c : cases()) {
    const double delta = splitting_degenerate(c.pot, c.n_l, c.n_r);
    const double tilde = tilde_delta(c.pot, c.n_l, c.n_r, c.pot.c());
    EXPECT_NEAR(tilde / delta, 1.0, 1e-12) << c.pot.family() << " " << c.n_l << c.n_r;
  }
}

TEST(TwoLevel, TildeDeltaIsIndependentOfC) {
  for (const auto& c : cases()) {
    const double ref = tilde_delta(c.pot, c.n_l, c.n_r, c.pot.c());
    for (double shift : {-0.8, -0.3, 0.3, 0.8}) {
      EXPECT_NEAR(tilde_delta(c.pot, c.n_l, c.n_r, c.pot.c() + shift) / ref, 1.0, 1e-9);
    }
  }
}

TEST(TwoLevel, LeftNormalizationArithmetic) {
  // Choose c so that the action from the n = 0 turning point to c is exactly 3.
  const auto pot = piecewise(4.0, 3.0, 5.0);
  auto f = [&](double c) { return barrier_action(pot, 0.5, c).left_to_c - 3.0; };
  const double c = numerics::find_root(f, -2.5, 2.5);
  EXPECT_NEAR(wkb_norm_left(pot, 0, c), 0.020594, 1e-6);
  EXPECT_GT(wkb_norm_left(pot, 0, c), 0.0);
  EXPECT_LT(wkb_norm_right(pot, 1, c, 0.5), 0.0);
}

TEST(TwoLevel, HamiltonianSpectrum) {
  const Matrix2 h = two_level_hamiltonian(0.7, 0.4, 0.1, 0);
  const auto [lo, hi] = eigenvalues(h);
  EXPECT_NEAR(hi - lo, std::hypot(0.3, 0.1), 1e-15);
  EXPECT_NEAR(lo + hi, 1.1, 1e-15);
  EXPECT_NEAR(h[0][1], -0.05, 0.0);
  EXPECT_NEAR(two_level_hamiltonian(0.7, 0.4, 0.1, 1)[0][1], 0.05, 0.0);
}

TEST(TwoLevel, MixingAngleConventions) {
  EXPECT_NEAR(mixing_angle(0.0, 1e-3, 0), -numerics::pi / 2.0, 1e-15);
  EXPECT_NEAR(mixing_angle(0.0, 1e-3, 1), numerics::pi / 2.0, 1e-15);
  EXPECT_NEAR(mixing_angle(1.0, 0.0, 0), 0.0, 0.0);
  EXPECT_NEAR(std::fabs(mixing_angle(-1.0, 0.0, 0)), numerics::pi, 0.0);
  EXPECT_EQ(kind_of([] { mixing_angle(0.0, 0.0, 0); }), ErrorKind::undefined_angle);
}

TEST(TwoLevel, StatesDiagonalizeTheHamiltonian) {
  for (int n_r : {0, 1}) {
    for (double d_eps : {-0.3, 0.0, 0.02, 0.5}) {
      const double tilde = 0.07;
      const Matrix2 h = two_level_hamiltonian(0.5 + d_eps, 0.5, tilde, n_r);
      const auto [lo, hi] = eigenvalues(h);
      const auto [plus, minus] = two_level_states(mixing_angle(d_eps, tilde, n_r), n_r);
      for (int i = 0; i < 2; ++i) {
        EXPECT_NEAR(h[i][0] * plus[0] + h[i][1] * plus[1], hi * plus[i], 1e-14);
        EXPECT_NEAR(h[i][0] * minus[0] + h[i][1] * minus[1], lo * minus[i], 1e-14);
      }
      EXPECT_NEAR(plus[0] * minus[0] + plus[1] * minus[1], 0.0, 1e-15);
      EXPECT_NEAR(plus[0] * plus[0] + plus[1] * plus[1], 1.0, 1e-15);
    }
  }
}

TEST(TwoLevel, FluxOfWkbTailsEqualsTildeDelta) {
  for (const auto& c : cases()) {
    const double ref = tilde_delta(c.pot, c.n_l, c.n_r, c.pot.c());
    const WkbTails tails = wkb_tails(c.pot, c.n_l, c.n_r, c.pot.c());
    for (double shift : {-0.5, 0.0, 0.5}) {
      const double x = c.pot.c() + shift;
      EXPECT_NEAR(flux_splitting(tails.left, tails.right, x, c.n_r, units) / ref, 1.0, 1e-9);
    }
  }
}

TEST(TwoLevel, FluxOfOracleStatesEqualsOracleGap) {
  const auto pot = piecewise(4.0, 3.0, 5.0);
  const SpectrumResult s = solve_spectrum(pot, auto_grid(pot), 2);
  const double r = 1.0 / std::sqrt(2.0);
  const Tail left = eigenvector_tail(s, {{0, r}, {1, r}});
  const Tail right = eigenvector_tail(s, {{0, r}, {1, -r}});
  const double flux = flux_splitting(left, right, pot.c(), 0, units);
  EXPECT_NEAR(std::fabs(flux) / pair_splitting(s, 0), 1.0, 1e-4);
}

TEST(TwoLevel, MatchingRatioAgreesWithNormRatio) {
  const auto pot = piecewise(4.0, 3.0, 5.0);
  for (int sign : {1, -1}) {
    const auto [lhs, rhs] = ab_ratio_check(pot, 0, 0, sign);
    EXPECT_NEAR(lhs / rhs, 1.0, 1e-6) << "sign=" << sign;
  }
  EXPECT_EQ(kind_of([&] { ab_ratio_check(pot, 0, 0, 0); }), ErrorKind::domain);
}

TEST(TwoLevel, ModelSummary) {
  const auto pot = piecewise(4.0, 3.0, 5.0, 1e-6);
  const TwoLevelModel m = two_level_model(pot, 0, 0);
  EXPECT_NEAR(m.eps_l - m.eps_r, -1e-6, 1e-15);
  EXPECT_NEAR(m.tilde_delta, 2.0 * m.wkb_norm_left * m.wkb_norm_right, 1e-20);
  EXPECT_NEAR(m.theta, mixing_angle(m.eps_l - m.eps_r, m.tilde_delta, 0), 0.0);
  EXPECT_NEAR(m.energy, 0.5 + 0.5e-6, 1e-15);
  EXPECT_GT(m.tail_overlap, 0.0);
  EXPECT_LT(m.tail_overlap, 1e-3 * 1.0);
  EXPECT_EQ(kind_of([&] { two_level_model(pot, 7, 0); }), ErrorKind::domain);
}

}  // namespace

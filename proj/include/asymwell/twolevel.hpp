#ifndef ASYMWELL_TWOLEVEL_HPP
#define ASYMWELL_TWOLEVEL_HPP

#include <array>
#include <cmath>
#include <optional>
#include <utility>

#include "asymwell/error.hpp"
#include "asymwell/numerics.hpp"
#include "asymwell/oracle.hpp"
#include "asymwell/potential.hpp"
#include "asymwell/quantize.hpp"
#include "asymwell/specfun.hpp"
#include "asymwell/wkb_matching.hpp"

namespace asymwell {

struct TwoLevelModel {
  double wkb_norm_left = 0.0;
  double wkb_norm_right = 0.0;
  double tilde_delta = 0.0;
  double eps_l = 0.0;
  double eps_r = 0.0;
  double theta = 0.0;
  int n_l = 0;
  int n_r = 0;
  double energy = 0.0;        // energy at which the tails are built
  double tail_overlap = 0.0;  // <psi_L|psi_R> over the barrier, neglected by the model
};

using Matrix2 = std::array<std::array<double, 2>, 2>;
using Vector2 = std::array<double, 2>;

namespace twolevel_detail {

inline double tail_energy(const DoubleWellPotential& pot, int n_l, int n_r) {
  const UnitsConfig& u = pot.units();
  return 0.5 * (epsilon_level(pot.left(), n_l, u) + epsilon_level(pot.right(), n_r, u));
}

inline void check_levels(int n_l, int n_r) {
  if (n_l < 0 || n_l > 6 || n_r < 0 || n_r > 6) fail(ErrorKind::domain, "two-level model: n must lie in [0, 6]");
}

}  // namespace twolevel_detail

/// N_L = sqrt(g_nL / 2 pi) / l_L * e^{-int_{a_nL}^c p/hbar}; the turning point sits at `energy` (default eps_L).
inline double wkb_norm_left(const DoubleWellPotential& potential, int n_l, double c,
                            std::optional<double> energy = std::nullopt) {
  twolevel_detail::check_levels(n_l, 0);
  const double e = energy.value_or(epsilon_level(potential.left(), n_l, potential.units()));
  const ActionIntegrals act = barrier_action(potential, e, c);
  return std::sqrt(g_factor(n_l) / (2.0 * numerics::pi)) / potential.left().l * std::exp(-act.left_to_c);
}

/// N_R = (-1)^{n_R} sqrt(g_nR / 2 pi) / l_R * e^{-int_c^{a_nR} p/hbar}.
inline double wkb_norm_right(const DoubleWellPotential& potential, int n_r, double c,
                             std::optional<double> energy = std::nullopt) {
  twolevel_detail::check_levels(0, n_r);
  const double e = energy.value_or(epsilon_level(potential.right(), n_r, potential.units()));
  const ActionIntegrals act = barrier_action(potential, e, c);
  return numerics::parity_sign(n_r) * std::sqrt(g_factor(n_r) / (2.0 * numerics::pi)) / potential.right().l *
         std::exp(-act.c_to_right);
}

/// (-1)^{n_R} (2 hbar^2 / m) N_L N_R with both tails built at (eps_L + eps_R) / 2.
inline double tilde_delta(const DoubleWellPotential& potential, int n_l, int n_r, double c) {
  const double e = twolevel_detail::tail_energy(potential, n_l, n_r);
  const UnitsConfig& u = potential.units();
  return numerics::parity_sign(n_r) * 2.0 * u.hbar * u.hbar / u.mass * wkb_norm_left(potential, n_l, c, e) *
         wkb_norm_right(potential, n_r, c, e);
}

inline Matrix2 two_level_hamiltonian(double eps_l, double eps_r, double tilde_delta_value, int n_r) {
  const double off = -numerics::parity_sign(n_r) * 0.5 * tilde_delta_value;
  return {{{eps_l, off}, {off, eps_r}}};
}

/// Eigenvalues (lower, upper) of a symmetric 2x2 matrix.
inline std::pair<double, double> eigenvalues(const Matrix2& h) {
  const double mean = 0.5 * (h[0][0] + h[1][1]);
  const double radius = std::hypot(0.5 * (h[0][0] - h[1][1]), h[0][1]);
  return {mean - radius, mean + radius};
}

/// theta with cos = d_eps / r and sin = (-1)^{n_R+1} tilde_delta / r.
inline double mixing_angle(double delta_eps, double tilde_delta_value, int n_r) {
  if (delta_eps == 0.0 && tilde_delta_value == 0.0) fail(ErrorKind::undefined_angle, "mixing_angle: both inputs vanish");
  return std::atan2(-numerics::parity_sign(n_r) * tilde_delta_value, delta_eps);
}

/// Coefficients of psi_+ and psi_- on (psi_L, psi_R).
inline std::pair<Vector2, Vector2> two_level_states(double theta, int n_r) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const double sign = numerics::parity_sign(n_r);
  return {Vector2{c, s}, Vector2{-sign * s, sign * c}};
}

/// (-1)^{n_R} (hbar^2 / m) [psi_L psi_R' - psi_R psi_L'] at c.
inline double flux_splitting(const Tail& left, const Tail& right, double c, int n_r, const UnitsConfig& units) {
  const TailSample l = left(c);
  const TailSample r = right(c);
  if (!std::isfinite(l.value) || !std::isfinite(r.value) || !std::isfinite(l.slope) || !std::isfinite(r.slope)) {
    fail(ErrorKind::domain, "flux_splitting: tails not evaluable at c");
  }
  return numerics::parity_sign(n_r) * units.hbar * units.hbar / units.mass * (l.value * r.slope - r.value * l.slope);
}

struct WkbTails {
  Tail left;
  Tail right;
  double energy;
};

/// Normalized WKB tails N_L sqrt(hbar/p) e^{-int_c^x} and N_R sqrt(hbar/p) e^{+int_c^x}, anchored at `anchor`.
inline WkbTails wkb_tails(const DoubleWellPotential& potential, int n_l, int n_r, double anchor) {
  const double e = twolevel_detail::tail_energy(potential, n_l, n_r);
  const double nl = wkb_norm_left(potential, n_l, anchor, e);
  const double nr = wkb_norm_right(potential, n_r, anchor, e);
  const TurningPair tp = turning_points(potential, e);
  auto local = [potential, e, anchor, tp](double x) {
    if (!(x > tp.a_nu_l && x < tp.a_nu_r)) fail(ErrorKind::domain, "WKB tail evaluated outside the barrier");
    const UnitsConfig& u = potential.units();
    const double k = wkb_detail::momentum_over_hbar(potential, e, x);
    const double p = k * u.hbar;
    const double dp = u.mass * potential.slope(x) / p;
    double integral = 0.0;
    if (x > anchor) integral = wkb_detail::integrate_momentum(potential, e, anchor, x, false, false);
    else if (x < anchor) integral = -wkb_detail::integrate_momentum(potential, e, x, anchor, false, false);
    return std::array<double, 4>{std::sqrt(1.0 / k), -0.5 * dp / p, k, integral};
  };
  WkbTails out;
  out.energy = e;
  out.left = [local, nl](double x) {
    const auto [amp, log_slope, k, integral] = local(x);
    const double v = nl * amp * std::exp(-integral);
    return TailSample{v, v * (log_slope - k)};
  };
  out.right = [local, nr](double x) {
    const auto [amp, log_slope, k, integral] = local(x);
    const double v = nr * amp * std::exp(integral);
    return TailSample{v, v * (log_slope + k)};
  };
  return out;
}

/// (B/A from the left matching at nu = n +- Delta/(2 hbar omega), -+(-1)^{n_R} N_L / N_R).
inline std::pair<double, double> ab_ratio_check(const DoubleWellPotential& potential, int n_l, int n_r,
                                                int branch_sign) {
  if (branch_sign != 1 && branch_sign != -1) fail(ErrorKind::domain, "ab_ratio_check: branch_sign must be +1 or -1");
  const UnitsConfig& u = potential.units();
  const double e = twolevel_detail::tail_energy(potential, n_l, n_r);
  const double delta = splitting_degenerate(potential, n_l, n_r);
  const double nu_l = n_l + branch_sign * delta / (2.0 * potential.left().quantum(u));
  const double c = potential.c();
  const ActionIntegrals act = barrier_action(potential, e, c);
  const MatchingCoefficients m = wkb_detail::match_left_any(1.0, nu_l, act.left_to_c, potential.left().l, act.total);
  const double lhs = m.b_coeff / m.a_coeff;
  const double rhs = -branch_sign * numerics::parity_sign(n_r) * wkb_norm_left(potential, n_l, c, e) /
                     wkb_norm_right(potential, n_r, c, e);
  return {lhs, rhs};
}

/// Full two-level description of levels (n_l, n_r) with tails anchored at c.
inline TwoLevelModel two_level_model(const DoubleWellPotential& potential, int n_l, int n_r,
                                     std::optional<double> c = std::nullopt) {
  const double anchor = c.value_or(potential.c());
  const UnitsConfig& u = potential.units();
  TwoLevelModel m;
  m.n_l = n_l;
  m.n_r = n_r;
  m.energy = twolevel_detail::tail_energy(potential, n_l, n_r);
  m.eps_l = epsilon_level(potential.left(), n_l, u);
  m.eps_r = epsilon_level(potential.right(), n_r, u);
  m.wkb_norm_left = wkb_norm_left(potential, n_l, anchor, m.energy);
  m.wkb_norm_right = wkb_norm_right(potential, n_r, anchor, m.energy);
  m.tilde_delta = numerics::parity_sign(n_r) * 2.0 * u.hbar * u.hbar / u.mass * m.wkb_norm_left * m.wkb_norm_right;
  m.theta = mixing_angle(m.eps_l - m.eps_r, m.tilde_delta, n_r);
  // psi_L psi_R = N_L N_R hbar / p: the exponentials cancel.
  const TurningPair tp = turning_points(potential, m.energy);
  const double lo = tp.a_nu_l + 0.5 * potential.left().l;
  const double hi = tp.a_nu_r - 0.5 * potential.right().l;
  if (lo < hi) {
    auto f = [&](double x) { return 1.0 / wkb_detail::momentum_over_hbar(potential, m.energy, x); };
    m.tail_overlap = m.wkb_norm_left * m.wkb_norm_right * numerics::integrate_smooth(f, lo, hi);
  }
  return m;
}

}  // namespace asymwell

#endif  // ASYMWELL_TWOLEVEL_HPP

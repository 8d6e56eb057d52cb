#ifndef ASYMWELL_WKB_MATCHING_HPP
#define ASYMWELL_WKB_MATCHING_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "asymwell/error.hpp"
#include "asymwell/numerics.hpp"
#include "asymwell/potential.hpp"
#include "asymwell/specfun.hpp"

namespace asymwell {

/// Barrier action integrals of p/hbar between the inner turning points.
struct ActionIntegrals {
  double total = 0.0;
  double left_to_c = 0.0;
  double c_to_right = 0.0;
  double energy = 0.0;
  double c_used = 0.0;
  double abs_error_estimate = 0.0;
};

enum class Branch { left_anchored, right_anchored };

inline const char* to_string(Branch b) { return b == Branch::left_anchored ? "left_anchored" : "right_anchored"; }

/// Which pair of matching relations the WKB approximation supports at a given nu.
enum class ValidityRegime { moderate, hermite_gaussian };

inline const char* to_string(ValidityRegime v) {
  return v == ValidityRegime::moderate ? "moderate" : "hermite_gaussian";
}

/// Amplitudes A (growing from c) and B (decaying from c) of the barrier WKB solution.
struct MatchingCoefficients {
  double a_coeff = 0.0;
  double b_coeff = 0.0;
  std::optional<double> c_left;
  std::optional<double> c_right;
  Branch branch = Branch::left_anchored;
  ValidityRegime regime = ValidityRegime::moderate;
  bool a_valid = true;
  bool b_valid = true;
};

struct QuadraticAction {
  double exact;
  double asymptotic;
};

struct AmplitudeRatio {
  double ratio;  // C_L / C_R
  Branch branch;
  double nu_l;
  double nu_r;
  double action;
};

namespace wkb_detail {

/// Width of the analytically integrated piece next to a turning point, in oscillator lengths.
constexpr double endpoint_width = 1e-6;

inline double momentum_over_hbar(const DoubleWellPotential& pot, double energy, double x) {
  const double d = pot.value(x) - energy;
  if (!(d > 0.0)) return 0.0;
  return std::sqrt(2.0 * pot.units().mass * d) / pot.units().hbar;
}

/// Integral of p/hbar over [lo, hi]; a turning point at either end is handled analytically
/// over a short linearized piece, the rest by double-exponential quadrature split at breakpoints.
inline double integrate_momentum(const DoubleWellPotential& pot, double energy, double lo, double hi,
                                 bool turning_lo, bool turning_hi, double* error = nullptr) {
  if (!(hi > lo)) return 0.0;
  const UnitsConfig& u = pot.units();
  const double delta =
      std::min(endpoint_width * std::min(pot.left().l, pot.right().l), 0.25 * (hi - lo));
  auto linear_piece = [&](double x_turn) {
    const double slope = std::fabs(pot.slope(x_turn));
    return (2.0 / 3.0) * std::sqrt(2.0 * u.mass * slope) * std::pow(delta, 1.5) / u.hbar;
  };
  double total = 0.0;
  double a = lo;
  double b = hi;
  if (turning_lo) {
    total += linear_piece(lo);
    a += delta;
  }
  if (turning_hi) {
    total += linear_piece(hi);
    b -= delta;
  }
  std::vector<double> cuts{a};
  for (double x : pot.breakpoints()) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  auto integrand = [&](double x) { return momentum_over_hbar(pot, energy, x); };
  double err_sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double err = 0.0;
    total += numerics::integrate_tanh_sinh(integrand, cuts[i], cuts[i + 1], 1e-14, &err);
    err_sum += err;
  }
  if (error != nullptr) *error = err_sum;
  return total;
}

inline ValidityRegime classify(double nu, double total_action) {
  const double s = std::fabs(numerics::sin_pi(nu));
  if (s == 0.0) return ValidityRegime::hermite_gaussian;
  return (1.0 / s <= std::exp(0.5 * total_action)) ? ValidityRegime::moderate : ValidityRegime::hermite_gaussian;
}

/// Left matching relations at real nu > -1/2 (no sign restriction).
inline MatchingCoefficients match_left_any(double c_left, double nu_l, double action_left_to_c, double l_left,
                                           double total_action) {
  const double g = specfun_detail::g_factor_extended(nu_l);
  const double fact = numerics::factorial_real(nu_l);
  MatchingCoefficients m;
  m.a_coeff = -numerics::sin_pi(nu_l) * std::sqrt(2.0 * fact) / (std::pow(numerics::pi, 0.25) * std::sqrt(l_left * g)) *
              std::exp(action_left_to_c) * c_left;
  m.b_coeff = numerics::cos_pi(nu_l) * std::sqrt(fact * g) / (std::pow(4.0 * numerics::pi, 0.25) * std::sqrt(l_left)) *
              std::exp(-action_left_to_c) * c_left;
  m.c_left = c_left;
  m.branch = Branch::left_anchored;
  m.regime = classify(nu_l, total_action);
  m.a_valid = m.regime == ValidityRegime::moderate;
  m.b_valid = m.regime == ValidityRegime::hermite_gaussian;
  return m;
}

/// Right matching relations at real nu > -1/2.
inline MatchingCoefficients match_right_any(double c_right, double nu_r, double action_c_to_right, double l_right,
                                            double total_action) {
  const double g = specfun_detail::g_factor_extended(nu_r);
  const double fact = numerics::factorial_real(nu_r);
  MatchingCoefficients m;
  m.a_coeff = numerics::cos_pi(nu_r) * std::sqrt(fact * g) / (std::pow(4.0 * numerics::pi, 0.25) * std::sqrt(l_right)) *
              std::exp(-action_c_to_right) * c_right;
  m.b_coeff = -numerics::sin_pi(nu_r) * std::sqrt(2.0 * fact) / (std::pow(numerics::pi, 0.25) * std::sqrt(l_right * g)) *
              std::exp(action_c_to_right) * c_right;
  m.c_right = c_right;
  m.branch = Branch::right_anchored;
  m.regime = classify(nu_r, total_action);
  m.a_valid = m.regime == ValidityRegime::hermite_gaussian;
  m.b_valid = m.regime == ValidityRegime::moderate;
  return m;
}

inline double nu_at(const WellParams& well, double energy, const UnitsConfig& units) {
  return (energy - well.v_min) / (units.hbar * well.omega) - 0.5;
}

}  // namespace wkb_detail

/// Integrals of p/hbar from a_nuL to c and from c to a_nuR at energy E.
inline ActionIntegrals barrier_action(const DoubleWellPotential& potential, double energy, double c) {
  const TurningPair tp = turning_points(potential, energy);
  if (!(tp.a_nu_l < c && c < tp.a_nu_r)) {
    fail(ErrorKind::domain, "c = " + std::to_string(c) + " lies outside the turning points (" +
                                std::to_string(tp.a_nu_l) + ", " + std::to_string(tp.a_nu_r) + ")");
  }
  ActionIntegrals out;
  double el = 0.0;
  double er = 0.0;
  out.left_to_c = wkb_detail::integrate_momentum(potential, energy, tp.a_nu_l, c, true, false, &el);
  out.c_to_right = wkb_detail::integrate_momentum(potential, energy, c, tp.a_nu_r, false, true, &er);
  out.total = out.left_to_c + out.c_to_right;
  out.energy = energy;
  out.c_used = c;
  out.abs_error_estimate = el + er;
  return out;
}

inline ActionIntegrals barrier_action(const DoubleWellPotential& potential, double energy) {
  return barrier_action(potential, energy, potential.c());
}

/// Integral of sqrt(z^2 - 2 nu - 1) from the turning coordinate to z_upper, with its large-z form.
inline QuadraticAction quadratic_action(double nu, double z_upper) {
  if (!(nu > -0.5)) fail(ErrorKind::domain, "quadratic_action: nu must exceed -1/2");
  const double b2 = 2.0 * nu + 1.0;
  const double b = std::sqrt(b2);
  if (!(z_upper >= b)) fail(ErrorKind::domain, "quadratic_action: z_upper lies below the turning coordinate");
  const double root = std::sqrt(std::max(0.0, z_upper * z_upper - b2));
  const double exact = 0.5 * z_upper * root - 0.5 * b2 * std::log((z_upper + root) / b);
  const double h = nu + 0.5;
  const double asymptotic = 0.5 * z_upper * z_upper - 0.5 * h - h * std::log(std::sqrt(2.0) * z_upper / std::sqrt(h));
  return {exact, asymptotic};
}

/// A and B from the left-well matching; `total_action` sets the validity tag (defaults to twice the given action).
inline MatchingCoefficients match_left(double c_left, double nu_l, double action_left_to_c, const WellParams& well,
                                       std::optional<double> total_action = std::nullopt) {
  if (!(nu_l >= 0.0)) fail(ErrorKind::domain, "match_left: nu_l must be non-negative");
  if (!std::isfinite(action_left_to_c)) fail(ErrorKind::domain, "match_left: action must be finite");
  return wkb_detail::match_left_any(c_left, nu_l, action_left_to_c, well.l,
                                    total_action.value_or(2.0 * action_left_to_c));
}

/// A and B from the right-well matching.
inline MatchingCoefficients match_right(double c_right, double nu_r, double action_c_to_right, const WellParams& well,
                                        std::optional<double> total_action = std::nullopt) {
  if (!(nu_r >= 0.0)) fail(ErrorKind::domain, "match_right: nu_r must be non-negative");
  if (!std::isfinite(action_c_to_right)) fail(ErrorKind::domain, "match_right: action must be finite");
  return wkb_detail::match_right_any(c_right, nu_r, action_c_to_right, well.l,
                                     total_action.value_or(2.0 * action_c_to_right));
}

/// C_L / C_R at energy E. left_anchored suits nu_L near an integer, right_anchored nu_R near an integer.
inline AmplitudeRatio amplitude_ratio(const DoubleWellPotential& potential, double energy, Branch branch) {
  const UnitsConfig& u = potential.units();
  const WellParams& wl = potential.left();
  const WellParams& wr = potential.right();
  const double nu_l = wkb_detail::nu_at(wl, energy, u);
  const double nu_r = wkb_detail::nu_at(wr, energy, u);
  if (!(nu_l > -0.5 && nu_r > -0.5)) fail(ErrorKind::domain, "amplitude_ratio: energy below a zero-point level");
  const ActionIntegrals act = barrier_action(potential, energy);
  const double s = act.total;
  const double gl = specfun_detail::g_factor_extended(nu_l);
  const double gr = specfun_detail::g_factor_extended(nu_r);
  const double root = std::sqrt(numerics::factorial_real(nu_r) * wl.l / (numerics::factorial_real(nu_l) * wr.l));
  double ratio;
  if (branch == Branch::left_anchored) {
    const double cl = numerics::cos_pi(nu_l);
    if (cl == 0.0) fail(ErrorKind::singular_input, "amplitude_ratio: cos(pi nu_L) vanishes");
    ratio = -2.0 * numerics::sin_pi(nu_r) / cl * root / std::sqrt(gl * gr) * std::exp(s);
  } else {
    const double sl = numerics::sin_pi(nu_l);
    if (sl == 0.0) fail(ErrorKind::singular_input, "amplitude_ratio: sin(pi nu_L) vanishes");
    ratio = -numerics::cos_pi(nu_r) / (2.0 * sl) * root * std::sqrt(gl * gr) * std::exp(-s);
  }
  return {ratio, branch, nu_l, nu_r, s};
}

/// A sqrt(hbar/p) e^{int_c^x p/hbar} + B sqrt(hbar/p) e^{-int_c^x p/hbar} with c = potential.c().
inline double wkb_wavefunction(const DoubleWellPotential& potential, double energy, const MatchingCoefficients& coeffs,
                               double x) {
  const TurningPair tp = turning_points(potential, energy);
  const double margin_l = 0.5 * potential.left().l;
  const double margin_r = 0.5 * potential.right().l;
  if (!(x >= tp.a_nu_l + margin_l && x <= tp.a_nu_r - margin_r)) {
    fail(ErrorKind::validity, "wkb_wavefunction: x must lie in the barrier at least l/2 from the turning points");
  }
  const double c = potential.c();
  if (!(tp.a_nu_l < c && c < tp.a_nu_r)) fail(ErrorKind::domain, "wkb_wavefunction: c outside the turning points");
  double action = 0.0;
  if (x > c) action = wkb_detail::integrate_momentum(potential, energy, c, x, false, false);
  else if (x < c) action = -wkb_detail::integrate_momentum(potential, energy, x, c, false, false);
  const double amplitude = std::sqrt(1.0 / wkb_detail::momentum_over_hbar(potential, energy, x));
  return amplitude * (coeffs.a_coeff * std::exp(action) + coeffs.b_coeff * std::exp(-action));
}

}  // namespace asymwell

#endif  // ASYMWELL_WKB_MATCHING_HPP

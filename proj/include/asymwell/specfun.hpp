#ifndef ASYMWELL_SPECFUN_HPP
#define ASYMWELL_SPECFUN_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "asymwell/error.hpp"
#include "asymwell/numerics.hpp"

namespace asymwell {

enum class PcfRegime { series, asymptotic, ode };

inline const char* to_string(PcfRegime r) {
  switch (r) {
    case PcfRegime::series: return "series";
    case PcfRegime::asymptotic: return "asymptotic";
    case PcfRegime::ode: return "ode";
  }
  return "unknown";
}

/// Value of D_nu(z) with its z-derivative.
struct PcfEvaluation {
  double value = 0.0;
  double derivative = 0.0;
  double abs_error_estimate = 0.0;
  PcfRegime regime = PcfRegime::series;
};

enum class AsymptoticOrder { printed, optimal };

namespace specfun_detail {

constexpr double nu_min = -0.5;
constexpr double nu_max = 12.0;
constexpr double z_max = 40.0;
constexpr double series_radius = 2.5;
constexpr double taylor_step = 0.25;
constexpr double eps = std::numeric_limits<double>::epsilon();

inline double asymptotic_radius(double nu) { return std::max(8.0, 3.0 * std::sqrt(2.0 * nu + 1.0)); }

inline void check_envelope(double nu, double z, const char* who) {
  if (!(nu >= nu_min && nu <= nu_max) || !(std::fabs(z) <= z_max)) {
    fail(ErrorKind::range, std::string(who) + ": (nu=" + std::to_string(nu) + ", z=" + std::to_string(z) +
                               ") outside the envelope nu in [-0.5, 12], |z| <= 40");
  }
}

struct State {
  double y;
  double dy;
};

/// D_nu(0) and D_nu'(0).
inline State origin(double nu) {
  const double sqrt_pi = std::sqrt(numerics::pi);
  return {std::exp2(0.5 * nu) * sqrt_pi * numerics::rgamma(0.5 * (1.0 - nu)),
          -std::exp2(0.5 * (nu + 1.0)) * sqrt_pi * numerics::rgamma(-0.5 * nu)};
}

/// Taylor expansion of y'' = (z^2/4 - nu - 1/2) y about z0, evaluated at z0 + t.
/// Returns the state and the sum of term magnitudes (for an error estimate).
inline std::pair<State, double> taylor(double nu, double z0, State s, double t) {
  // c_{k+2} = [q0 c_k + (z0/2) c_{k-1} + c_{k-2}/4] / ((k+2)(k+1))
  const double q0 = 0.25 * z0 * z0 - (nu + 0.5);
  double cm2 = 0.0;
  double cm1 = 0.0;
  double c0 = s.y;
  double c1 = s.dy;
  double value = s.y + s.dy * t;
  double slope = s.dy;
  double magnitude = std::fabs(s.y) + std::fabs(s.dy * t);
  double tp = t;  // t^{k+1}
  int quiet = 0;
  for (int k = 0; k < 400; ++k) {
    const double next = (q0 * c0 + 0.5 * z0 * cm1 + 0.25 * cm2) / ((k + 2.0) * (k + 1.0));
    const double term = next * tp * t;
    value += term;
    slope += (k + 2.0) * next * tp;
    magnitude += std::fabs(term);
    if (std::fabs(term) <= 1e-17 * std::fabs(value)) {
      if (++quiet >= 3) break;
    } else {
      quiet = 0;
    }
    tp *= t;
    cm2 = cm1;
    cm1 = c0;
    c0 = c1;
    c1 = next;
  }
  return {{value, slope}, magnitude};
}

/// Walks the Taylor expansion from z_from to z_to in equal steps of at most `taylor_step`.
inline std::pair<State, double> taylor_walk(double nu, double z_from, State s, double z_to) {
  const int steps = std::max(1, static_cast<int>(std::ceil(std::fabs(z_to - z_from) / taylor_step)));
  const double h = (z_to - z_from) / steps;
  double err = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double z0 = z_from + i * h;
    auto [next, magnitude] = taylor(nu, z0, s, h);
    s = next;
    err = err + 4.0 * eps * magnitude;
    err = std::max(err, 4.0 * eps * std::fabs(s.y) * (i + 1));
  }
  return {s, err};
}

/// Series part of one asymptotic branch, with its x-derivative and the omitted-term magnitude.
struct BranchSum {
  double sum;
  double dsum;  // d/dx of the sum
  double tail;  // magnitude of the first omitted term
};

/// decaying: sum_s (-1)^s nu(nu-1)...(nu-2s+1) / (s! (2x^2)^s)
/// growing:  sum_s (nu+1)...(nu+2s) / (s! (2x^2)^s)
inline BranchSum branch_sum(double nu, double x, bool growing, AsymptoticOrder order) {
  const double inv = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  double dsum = 0.0;
  const int max_terms = (order == AsymptoticOrder::printed) ? 1 : 200;
  for (int s = 0; s < max_terms + 1; ++s) {
    double ratio;
    if (growing) ratio = (nu + 2.0 * s + 1.0) * (nu + 2.0 * s + 2.0) * inv / (s + 1.0);
    else ratio = -(nu - 2.0 * s) * (nu - 2.0 * s - 1.0) * inv / (s + 1.0);
    const double next = term * ratio;
    if (s == max_terms) return {sum, dsum, std::fabs(next)};
    if (next == 0.0) return {sum, dsum, 0.0};
    if (order == AsymptoticOrder::optimal) {
      if (std::fabs(next) > std::fabs(term)) return {sum, dsum, std::fabs(next)};
      if (std::fabs(next) <= 1e-17 * std::fabs(sum)) return {sum + next, dsum - 2.0 * (s + 1) * next / x, 0.0};
    }
    sum += next;
    dsum += -2.0 * (s + 1) * next / x;
    term = next;
  }
  return {sum, dsum, std::fabs(term)};
}

/// Decaying solution x^nu e^{-x^2/4} (1 + ...) at x > 0 with d/dx.
inline PcfEvaluation decaying_branch(double nu, double x, AsymptoticOrder order) {
  const BranchSum b = branch_sum(nu, x, false, order);
  const double p = std::exp(nu * std::log(x) - 0.25 * x * x);
  const double dp = p * (nu / x - 0.5 * x);
  PcfEvaluation out;
  out.value = p * b.sum;
  out.derivative = dp * b.sum + p * b.dsum;
  out.abs_error_estimate = std::fabs(p) * (b.tail + 4.0 * eps * std::fabs(b.sum));
  out.regime = PcfRegime::asymptotic;
  return out;
}

/// Growing solution x^{-nu-1} e^{x^2/4} (1 + ...) at x > 0 with d/dx.
inline PcfEvaluation growing_branch(double nu, double x, AsymptoticOrder order) {
  const BranchSum b = branch_sum(nu, x, true, order);
  const double q = std::exp(-(nu + 1.0) * std::log(x) + 0.25 * x * x);
  const double dq = q * (-(nu + 1.0) / x + 0.5 * x);
  PcfEvaluation out;
  out.value = q * b.sum;
  out.derivative = dq * b.sum + q * b.dsum;
  out.abs_error_estimate = std::fabs(q) * (b.tail + 4.0 * eps * std::fabs(b.sum));
  out.regime = PcfRegime::asymptotic;
  return out;
}

/// Full asymptotic form at negative z = -x (both branches).
inline PcfEvaluation negative_asymptotic(double nu, double x, AsymptoticOrder order) {
  const double c = numerics::cos_pi(nu);
  const double s = numerics::sin_pi(nu);
  PcfEvaluation out;
  out.regime = PcfRegime::asymptotic;
  if (c != 0.0) {
    const PcfEvaluation d = decaying_branch(nu, x, order);
    out.value += c * d.value;
    out.derivative -= c * d.derivative;
    out.abs_error_estimate += std::fabs(c) * d.abs_error_estimate;
  }
  if (s != 0.0) {
    const double amp = -s * std::tgamma(nu + 1.0) * std::sqrt(2.0 / numerics::pi);
    const PcfEvaluation g = growing_branch(nu, x, order);
    out.value += amp * g.value;
    out.derivative -= amp * g.derivative;
    out.abs_error_estimate += std::fabs(amp) * g.abs_error_estimate;
  }
  return out;
}

/// D_nu(x) for x >= 0.
inline PcfEvaluation positive(double nu, double x) {
  const double radius = asymptotic_radius(nu);
  if (x >= radius) return decaying_branch(nu, x, AsymptoticOrder::optimal);
  if (x <= series_radius) {
    auto [s, err] = taylor(nu, 0.0, origin(nu), x);
    return {s.y, s.dy, 4.0 * eps * err + 4.0 * eps * std::fabs(s.y), PcfRegime::series};
  }
  const PcfEvaluation start = decaying_branch(nu, radius, AsymptoticOrder::optimal);
  auto [s, err] = taylor_walk(nu, radius, {start.value, start.derivative}, x);
  const double rel_start = start.abs_error_estimate / std::max(std::fabs(start.value), 1e-300);
  return {s.y, s.dy, err + rel_start * std::fabs(s.y), PcfRegime::ode};
}

/// H(x) = D_nu(-x) - cos(pi nu) D_nu(x): the part of D_nu(-x) that grows with x.
inline std::pair<State, double> reflected_part(double nu, double x) {
  const State o = origin(nu);
  const double sh = numerics::sin_pi(0.5 * nu);
  const double ch = numerics::cos_pi(0.5 * nu);
  const State h0{2.0 * sh * sh * o.y, -2.0 * ch * ch * o.dy};
  if (h0.y == 0.0 && h0.dy == 0.0) return {{0.0, 0.0}, 0.0};
  if (x <= series_radius) {
    auto [s, mag] = taylor(nu, 0.0, h0, x);
    return {s, 4.0 * eps * mag};
  }
  return taylor_walk(nu, 0.0, h0, x);
}

}  // namespace specfun_detail

/// Parabolic cylinder function D_nu(z) for real order and argument.
inline PcfEvaluation pcf_d(double nu, double z) {
  using namespace specfun_detail;
  check_envelope(nu, z, "pcf_d");
  const double x = std::fabs(z);
  if (z >= 0.0) return positive(nu, x);
  if (x >= asymptotic_radius(nu)) return negative_asymptotic(nu, x, AsymptoticOrder::optimal);
  const PcfEvaluation d = positive(nu, x);
  const double c = numerics::cos_pi(nu);
  auto [h, herr] = reflected_part(nu, x);
  PcfEvaluation out;
  out.value = c * d.value + h.y;
  out.derivative = -(c * d.derivative + h.dy);
  out.abs_error_estimate = std::fabs(c) * d.abs_error_estimate + herr;
  out.regime = (x <= series_radius) ? PcfRegime::series : PcfRegime::ode;
  return out;
}

/// Large-|z| expansion at negative z; `printed` keeps the two leading terms of each branch.
inline PcfEvaluation pcf_d_asymptotic(double nu, double z, AsymptoticOrder order = AsymptoticOrder::printed) {
  using namespace specfun_detail;
  check_envelope(nu, z, "pcf_d_asymptotic");
  const double threshold = std::max(6.0, 3.0 * std::sqrt(2.0 * nu + 1.0));
  if (!(z <= -threshold)) {
    fail(ErrorKind::range, "pcf_d_asymptotic: requires z <= -" + std::to_string(threshold) + ", got " +
                               std::to_string(z));
  }
  return negative_asymptotic(nu, -z, order);
}

namespace specfun_detail {

inline State rk4_step(double nu, double z, State s, double h) {
  auto f = [nu](double zz, State st) { return State{st.dy, (0.25 * zz * zz - nu - 0.5) * st.y}; };
  const State k1 = f(z, s);
  const State k2 = f(z + 0.5 * h, {s.y + 0.5 * h * k1.y, s.dy + 0.5 * h * k1.dy});
  const State k3 = f(z + 0.5 * h, {s.y + 0.5 * h * k2.y, s.dy + 0.5 * h * k2.dy});
  const State k4 = f(z + h, {s.y + h * k3.y, s.dy + h * k3.dy});
  return {s.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
          s.dy + h / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy)};
}

/// Integrates from z0 to each target (same direction), returning states at the targets.
template <std::size_t N>
std::array<State, N> rk4_path(double nu, double z0, State s, const std::array<double, N>& targets, int steps_per_unit) {
  std::array<State, N> out{};
  double z = z0;
  for (std::size_t i = 0; i < N; ++i) {
    const double span = targets[i] - z;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::fabs(span) * steps_per_unit)));
    const double h = span / steps;
    for (int k = 0; k < steps; ++k) s = rk4_step(nu, z + k * h, s, h);
    z = targets[i];
    out[i] = s;
  }
  return out;
}

/// Richardson combination of a coarse and a fine RK4 result.
inline std::pair<State, State> richardson(State coarse, State fine) {
  return {{fine.y + (fine.y - coarse.y) / 15.0, fine.dy + (fine.dy - coarse.dy) / 15.0},
          {std::fabs(fine.y - coarse.y) / 15.0, std::fabs(fine.dy - coarse.dy) / 15.0}};
}

}  // namespace specfun_detail

/// Independent oracle: RK4 integration of D'' = (z^2/4 - nu - 1/2) D with step doubling,
/// normalized by the closed-form D_nu(0), D_nu'(0).
inline PcfEvaluation pcf_d_ode(double nu, double z) {
  using namespace specfun_detail;
  check_envelope(nu, z, "pcf_d_ode");
  if (!(std::fabs(z) <= 15.0)) fail(ErrorKind::range, "pcf_d_ode: |z| must not exceed 15");
  const double x = std::fabs(z);
  const State o = origin(nu);

  // Decaying solution on [0, far], integrated inward from a far point seeded with the leading shape.
  const double far = std::sqrt(x * x + 80.0);
  const double rate = std::max({0.5 * far, std::sqrt(std::fabs(nu + 0.5)), 1.0});
  const int per_unit = static_cast<int>(std::ceil(rate * 60.0));
  const State seed{1.0, nu / far - 0.5 * far};
  const std::array<double, 2> inward{x, 0.0};
  const auto coarse = rk4_path(nu, far, seed, inward, per_unit);
  const auto fine = rk4_path(nu, far, seed, inward, 2 * per_unit);
  const auto [at_x, err_x] = richardson(coarse[0], fine[0]);
  const auto [at_0, err_0] = richardson(coarse[1], fine[1]);
  const double norm = (at_0.y * o.y + at_0.dy * o.dy) / (at_0.y * at_0.y + at_0.dy * at_0.dy);
  PcfEvaluation d{norm * at_x.y, norm * at_x.dy, std::fabs(norm) * err_x.y, PcfRegime::ode};
  d.abs_error_estimate += std::fabs(d.value) * (std::hypot(err_0.y, err_0.dy) / std::hypot(at_0.y, at_0.dy) + 16.0 * eps);
  if (z >= 0.0) return d;

  // D_nu(-x) = cos(pi nu) D_nu(x) + H(x), H integrated outward from the origin.
  const double sh = numerics::sin_pi(0.5 * nu);
  const double ch = numerics::cos_pi(0.5 * nu);
  const State h0{2.0 * sh * sh * o.y, -2.0 * ch * ch * o.dy};
  const int out_per_unit = static_cast<int>(std::ceil(std::max({0.5 * x, std::sqrt(std::fabs(nu + 0.5)), 1.0}) * 60.0));
  const std::array<double, 1> outward{x};
  const auto hc = rk4_path(nu, 0.0, h0, outward, out_per_unit);
  const auto hf = rk4_path(nu, 0.0, h0, outward, 2 * out_per_unit);
  const auto [h, herr] = richardson(hc[0], hf[0]);
  const double c = numerics::cos_pi(nu);
  PcfEvaluation out;
  out.value = c * d.value + h.y;
  out.derivative = -(c * d.derivative + h.dy);
  out.abs_error_estimate = std::fabs(c) * d.abs_error_estimate + herr.y + 16.0 * eps * std::fabs(h.y);
  out.regime = PcfRegime::ode;
  return out;
}

namespace specfun_detail {

/// g at real nu > -1/2; continuous through nu = 0.
inline double g_factor_extended(double nu) {
  if (!(nu > -0.5)) fail(ErrorKind::domain, "g factor requires nu > -1/2, got " + std::to_string(nu));
  const double h = nu + 0.5;
  return std::sqrt(2.0 * numerics::pi) * std::exp(h * std::log(h) - h - std::lgamma(nu + 1.0));
}

}  // namespace specfun_detail

/// g_nu = sqrt(2 pi) / nu! * (nu + 1/2)^{nu + 1/2} e^{-nu - 1/2}.
inline double g_factor(double nu) {
  if (!(nu >= 0.0)) fail(ErrorKind::domain, "g_factor requires nu >= 0, got " + std::to_string(nu));
  return specfun_detail::g_factor_extended(nu);
}

/// Normalized harmonic-oscillator eigenfunction of order n centred at `center`.
inline double hermite_gaussian(int n, double center, double l, double x) {
  if (n < 0 || n > 12) fail(ErrorKind::domain, "hermite_gaussian: n must lie in [0, 12]");
  if (!(l > 0.0)) fail(ErrorKind::domain, "hermite_gaussian: l must be positive");
  const double t = (x - center) / l;
  const double norm = 1.0 / (std::pow(numerics::pi, 0.25) * std::sqrt(std::ldexp(1.0, n) * std::tgamma(n + 1.0) * l));
  return norm * std::hermite(static_cast<unsigned>(n), t) * std::exp(-0.5 * t * t);
}

/// (D_n(z), 2^{-n/2} e^{-z^2/4} H_n(z / sqrt 2)).
inline std::pair<double, double> pcf_hermite_identity(int n, double z) {
  if (n < 0 || n > 12) fail(ErrorKind::domain, "pcf_hermite_identity: n must lie in [0, 12]");
  const double lhs = pcf_d(n, z).value;
  const double rhs = std::exp2(-0.5 * n) * std::exp(-0.25 * z * z) * std::hermite(static_cast<unsigned>(n), z / std::sqrt(2.0));
  return {lhs, rhs};
}

}  // namespace asymwell

#endif  // ASYMWELL_SPECFUN_HPP

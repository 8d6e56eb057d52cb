#ifndef ASYMWELL_POTENTIAL_HPP
#define ASYMWELL_POTENTIAL_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "asymwell/error.hpp"
#include "asymwell/numerics.hpp"
#include "asymwell/spline.hpp"

namespace asymwell {

/// Action and mass units. All formulas keep hbar and mass symbolic.
struct UnitsConfig {
  double hbar = 1.0;
  double mass = 1.0;

  void validate() const {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) fail(ErrorKind::config, "units.hbar must be positive");
    if (!(mass > 0.0) || !std::isfinite(mass)) fail(ErrorKind::config, "units.mass must be positive");
  }
};

struct ValueSlope {
  double value;
  double slope;
};

using Evaluator = std::function<ValueSlope(double)>;

struct Interval {
  double lo;
  double hi;
};

/// Parameters of one parabolic well: V(x) ~ v_min + m omega^2 (x - a)^2 / 2 for |x - a| <= parabolic_extent.
struct WellParams {
  double a = 0.0;
  double omega = 1.0;
  double v_min = 0.0;
  double l = 1.0;  // oscillator length sqrt(hbar / (m omega))
  double parabolic_extent = 1.0;

  static WellParams make(double a, double omega, double v_min, double extent, const UnitsConfig& units) {
    if (!(omega > 0.0)) fail(ErrorKind::construction, "well omega must be positive");
    if (!(extent > 0.0)) fail(ErrorKind::construction, "well parabolic extent must be positive");
    return WellParams{a, omega, v_min, std::sqrt(units.hbar / (units.mass * omega)), extent};
  }

  double quantum(const UnitsConfig& units) const { return units.hbar * omega; }

  double quadratic_model(double x, const UnitsConfig& units) const {
    const double t = x - a;
    return v_min + 0.5 * units.mass * omega * omega * t * t;
  }
};

struct TurningPair {
  double a_nu_l;
  double a_nu_r;
  double energy;
};

struct BarrierTop {
  double x_top;
  double v_top;
};

/// Controls the certification of the parabolic neighbourhood of each minimum.
struct CertificationOptions {
  /// Allowed |V - quadratic model| in units of hbar*omega of the well.
  double tolerance = 1e-9;
};

/// An immutable double-well potential with its two certified parabolic wells.
class DoubleWellPotential {
 public:
  DoubleWellPotential(Evaluator evaluator, WellParams left, WellParams right, Interval domain,
                      UnitsConfig units, BarrierTop top, std::optional<double> c = std::nullopt,
                      std::string family = "custom", std::vector<std::string> warnings = {},
                      std::vector<double> breakpoints = {})
      : evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))),
        left_(left),
        right_(right),
        domain_(domain),
        units_(units),
        top_(top),
        c_(c.value_or(top.x_top)),
        family_(std::move(family)),
        warnings_(std::move(warnings)),
        breakpoints_(std::move(breakpoints)) {
    units_.validate();
    if (!(left_.a < right_.a)) fail(ErrorKind::construction, "left minimum must lie left of the right minimum");
    if (!(domain_.lo < left_.a && right_.a < domain_.hi)) {
      fail(ErrorKind::construction, "domain must contain both minima");
    }
    check_c(c_);
    if (!(top_.v_top > std::max(left_.v_min, right_.v_min))) {
      fail(ErrorKind::construction, "barrier top must lie above both well floors");
    }
  }

  ValueSlope eval(double x) const { return (*evaluator_)(x); }
  double value(double x) const { return eval(x).value; }
  double slope(double x) const { return eval(x).slope; }

  const WellParams& left() const { return left_; }
  const WellParams& right() const { return right_; }
  const Interval& domain() const { return domain_; }
  const UnitsConfig& units() const { return units_; }
  const BarrierTop& top() const { return top_; }
  double c() const { return c_; }
  const std::string& family() const { return family_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  const Evaluator& evaluator() const { return *evaluator_; }
  /// Abscissas where V'' may jump; quadratures split there.
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  /// Copy with a different reference point c inside the barrier.
  DoubleWellPotential with_c(double c) const {
    DoubleWellPotential copy = *this;
    copy.check_c(c);
    copy.c_ = c;
    return copy;
  }

  double max_quantum() const { return std::max(left_.quantum(units_), right_.quantum(units_)); }
  double min_quantum() const { return std::min(left_.quantum(units_), right_.quantum(units_)); }

 private:
  void check_c(double c) const {
    if (!(left_.a < c && c < right_.a)) fail(ErrorKind::domain, "c must lie strictly between the minima");
    if (!(value(c) > std::max(left_.v_min, right_.v_min))) {
      fail(ErrorKind::domain, "V(c) must exceed both well floors");
    }
  }

  std::shared_ptr<const Evaluator> evaluator_;
  WellParams left_;
  WellParams right_;
  Interval domain_;
  UnitsConfig units_;
  BarrierTop top_;
  double c_;
  std::string family_;
  std::vector<std::string> warnings_;
  std::vector<double> breakpoints_;
};

namespace detail {

/// Minimum of V from a bracket with V'(lo) < 0 < V'(hi).
inline double refine_minimum(const Evaluator& ev, double lo, double hi) {
  auto dv = [&](double x) { return ev(x).slope; };
  return numerics::find_root(dv, lo, hi);
}

/// omega from a Richardson-extrapolated central second difference of V with step l/100.
inline double curvature_omega(const Evaluator& ev, double a, const UnitsConfig& units, double scale) {
  auto second_difference = [&](double h) {
    return (ev(a + h).value - 2.0 * ev(a).value + ev(a - h).value) / (h * h);
  };
  auto richardson = [&](double h) { return (4.0 * second_difference(0.5 * h) - second_difference(h)) / 3.0; };
  double h = 1e-3 * scale;
  double curvature = richardson(h);
  for (int pass = 0; pass < 3; ++pass) {
    if (!(curvature > 0.0)) fail(ErrorKind::shape, "non-positive curvature at a located minimum");
    const double omega = std::sqrt(curvature / units.mass);
    const double l = std::sqrt(units.hbar / (units.mass * omega));
    const double next = l / 100.0;
    if (std::fabs(next - h) <= 1e-3 * h) break;
    h = next;
    curvature = richardson(h);
  }
  if (!(curvature > 0.0)) fail(ErrorKind::shape, "non-positive curvature at a located minimum");
  return std::sqrt(curvature / units.mass);
}

/// Largest half-width around a on which |V - quadratic model| <= tolerance * hbar omega.
inline double certify_extent(const Evaluator& ev, const WellParams& well, const UnitsConfig& units,
                             double limit_lo, double limit_hi, const CertificationOptions& cert) {
  const double tol = cert.tolerance * well.quantum(units);
  auto residual = [&](double x) { return std::fabs(ev(x).value - well.quadratic_model(x, units)); };
  auto side = [&](double direction, double max_distance) {
    const double step = well.l / 64.0;
    double good = 0.0;
    double t = step;
    while (t <= max_distance) {
      if (residual(well.a + direction * t) > tol) {
        double lo = good;
        double hi = t;
        for (int i = 0; i < 60; ++i) {
          const double mid = 0.5 * (lo + hi);
          if (residual(well.a + direction * mid) > tol) hi = mid;
          else lo = mid;
        }
        return lo;
      }
      good = t;
      t += step;
    }
    return max_distance;
  };
  const double extent = std::min(side(-1.0, well.a - limit_lo), side(1.0, limit_hi - well.a));
  if (!(extent > 0.0)) fail(ErrorKind::shape, "no certified parabolic neighbourhood around a minimum");
  return extent;
}

inline WellParams well_at(const Evaluator& ev, double a, const UnitsConfig& units, double scale,
                          double limit_lo, double limit_hi, const CertificationOptions& cert) {
  WellParams well;
  well.a = a;
  well.v_min = ev(a).value;
  well.omega = curvature_omega(ev, a, units, scale);
  well.l = std::sqrt(units.hbar / (units.mass * well.omega));
  well.parabolic_extent = 1.0;
  well.parabolic_extent = certify_extent(ev, well, units, limit_lo, limit_hi, cert);
  return well;
}

/// Interior maximum of V between the two minima (highest one if the barrier has bumps).
inline BarrierTop find_barrier_top(const Evaluator& ev, double a_left, double a_right) {
  constexpr int samples = 2000;
  const double step = (a_right - a_left) / samples;
  double best_x = a_left + step;
  double best_v = ev(best_x).value;
  std::optional<std::pair<double, double>> best_bracket;
  double prev_x = a_left + step;
  double prev_d = ev(prev_x).slope;
  for (int i = 2; i < samples; ++i) {
    const double x = a_left + i * step;
    const ValueSlope vs = ev(x);
    if (prev_d > 0.0 && vs.slope <= 0.0) {
      const double peak = std::max(ev(prev_x).value, vs.value);
      if (!best_bracket || peak > best_v) {
        best_bracket = std::make_pair(prev_x, x);
        best_v = peak;
      }
    }
    prev_x = x;
    prev_d = vs.slope;
  }
  if (!best_bracket) fail(ErrorKind::shape, "no interior maximum between the minima");
  auto dv = [&](double x) { return ev(x).slope; };
  best_x = numerics::find_root(dv, best_bracket->first, best_bracket->second);
  return {best_x, ev(best_x).value};
}

/// Walks outward from a minimum until V exceeds `level` and the distance exceeds `min_distance`.
inline double walk_outward(const Evaluator& ev, double a, double direction, double level, double min_distance,
                           double step, double max_distance = 1e6) {
  double t = step;
  while (t < max_distance) {
    if (t >= min_distance && ev(a + direction * t).value >= level) return a + direction * t;
    t += step;
  }
  fail(ErrorKind::construction, "potential does not confine: V never exceeds the requested level");
}

inline Interval family_domain(const Evaluator& ev, double a_left, double a_right, double l_left, double l_right,
                              double level) {
  return {walk_outward(ev, a_left, -1.0, level, 12.0 * l_left, l_left / 8.0),
          walk_outward(ev, a_right, 1.0, level, 12.0 * l_right, l_right / 8.0)};
}

inline std::vector<std::string> barrier_warnings(const WellParams& left, const WellParams& right, double v_top,
                                                 const UnitsConfig& units) {
  std::vector<std::string> out;
  auto check = [&](const WellParams& w, const char* name) {
    const double height = v_top - w.v_min;
    if (height < 2.0 * w.quantum(units)) {
      std::ostringstream os;
      os << name << " well: barrier height " << height << " is not large compared to hbar*omega = "
         << w.quantum(units);
      out.push_back(os.str());
    }
  };
  check(left, "left");
  check(right, "right");
  return out;
}

/// Both minima of a confining potential on its domain; exactly two are required.
inline std::pair<WellParams, WellParams> locate_wells(const Evaluator& ev, Interval domain, const UnitsConfig& units,
                                                      const CertificationOptions& cert) {
  constexpr int samples = 4000;
  const double width = domain.hi - domain.lo;
  const double step = width / samples;
  std::vector<std::pair<double, double>> brackets;
  double prev_x = domain.lo;
  double prev_d = ev(prev_x).slope;
  for (int i = 1; i <= samples; ++i) {
    const double x = (i == samples) ? domain.hi : domain.lo + i * step;
    const double d = ev(x).slope;
    if (prev_d < 0.0 && d >= 0.0) brackets.emplace_back(prev_x, x);
    prev_x = x;
    prev_d = d;
  }
  if (brackets.size() != 2) {
    fail(ErrorKind::shape, "expected exactly two interior minima, found " + std::to_string(brackets.size()));
  }
  const double a_left = refine_minimum(ev, brackets[0].first, brackets[0].second);
  const double a_right = refine_minimum(ev, brackets[1].first, brackets[1].second);
  const BarrierTop top = find_barrier_top(ev, a_left, a_right);
  WellParams left = well_at(ev, a_left, units, width, domain.lo, top.x_top, cert);
  WellParams right = well_at(ev, a_right, units, width, top.x_top, domain.hi, cert);
  return {left, right};
}

}  // namespace detail

/// Locates both wells of an existing potential (black-box extraction).
inline std::pair<WellParams, WellParams> locate_wells(const DoubleWellPotential& potential,
                                                      const CertificationOptions& cert = {}) {
  return detail::locate_wells(potential.evaluator(), potential.domain(), potential.units(), cert);
}

inline BarrierTop barrier_top(const DoubleWellPotential& potential) { return potential.top(); }

/// Inner classical turning points at energy E, one on each side of the barrier top.
inline TurningPair turning_points(const DoubleWellPotential& potential, double energy) {
  const auto& left = potential.left();
  const auto& right = potential.right();
  const BarrierTop& top = potential.top();
  if (!(energy < top.v_top)) {
    fail(ErrorKind::no_barrier, "energy " + std::to_string(energy) + " is not below the barrier top");
  }
  if (!(energy > std::max(left.v_min, right.v_min))) {
    fail(ErrorKind::domain, "energy " + std::to_string(energy) + " lies below a well floor");
  }
  auto f = [&](double x) { return potential.value(x) - energy; };
  const double xl = numerics::find_root(f, left.a, top.x_top, left.v_min - energy, top.v_top - energy);
  const double xr = numerics::find_root(f, top.x_top, right.a, top.v_top - energy, right.v_min - energy);
  return {xl, xr, energy};
}

/// Outer turning points (x < a_L and x > a_R) at energy E.
inline std::pair<double, double> outer_turning_points(const DoubleWellPotential& potential, double energy) {
  const auto& left = potential.left();
  const auto& right = potential.right();
  auto f = [&](double x) { return potential.value(x) - energy; };
  const Interval dom = potential.domain();
  if (!(f(dom.lo) > 0.0) || !(f(dom.hi) > 0.0)) {
    fail(ErrorKind::coverage, "energy exceeds the potential at the domain edge");
  }
  const double lo = numerics::find_root(f, dom.lo, left.a, f(dom.lo), left.v_min - energy);
  const double hi = numerics::find_root(f, right.a, dom.hi, right.v_min - energy, f(dom.hi));
  return {lo, hi};
}

/// V(x) = k (x^2 - a^2)^2 + bias * x.
inline DoubleWellPotential build_biased_quartic(double half_separation, double barrier_scale, double bias,
                                                const UnitsConfig& units, const CertificationOptions& cert = {}) {
  units.validate();
  const double a = half_separation;
  const double k = barrier_scale;
  if (!(a > 0.0)) fail(ErrorKind::construction, "half_separation must be positive");
  if (!(k > 0.0)) fail(ErrorKind::construction, "barrier_scale must be positive");
  // V' = 4k x (x^2 - a^2) + bias has three real roots iff |bias| < 8 k a^3 / (3 sqrt 3).
  const double critical = 8.0 * k * a * a * a / (3.0 * std::sqrt(3.0));
  if (!(std::fabs(bias) < critical)) {
    fail(ErrorKind::construction, "bias is large enough that one minimum disappears");
  }
  Evaluator ev = [a, k, bias](double x) {
    const double s = x * x - a * a;
    return ValueSlope{k * s * s + bias * x, 4.0 * k * x * s + bias};
  };
  const double inflection = a / std::sqrt(3.0);
  double far = 2.0 * a;
  while (ev(-far).slope >= 0.0 || ev(far).slope <= 0.0) far *= 2.0;
  const double a_left = detail::refine_minimum(ev, -far, -inflection);
  const double a_right = detail::refine_minimum(ev, inflection, far);
  const BarrierTop top = detail::find_barrier_top(ev, a_left, a_right);
  const double scale = a_right - a_left;

  // Provisional wells for the domain length scales.
  const double wl = detail::curvature_omega(ev, a_left, units, scale);
  const double wr = detail::curvature_omega(ev, a_right, units, scale);
  const double ll = std::sqrt(units.hbar / (units.mass * wl));
  const double lr = std::sqrt(units.hbar / (units.mass * wr));
  const double level = top.v_top + 10.0 * units.hbar * std::max(wl, wr);
  const Interval domain = detail::family_domain(ev, a_left, a_right, ll, lr, level);

  WellParams left = detail::well_at(ev, a_left, units, scale, domain.lo, top.x_top, cert);
  WellParams right = detail::well_at(ev, a_right, units, scale, top.x_top, domain.hi, cert);
  auto warnings = detail::barrier_warnings(left, right, top.v_top, units);
  return DoubleWellPotential(std::move(ev), left, right, domain, units, top, std::nullopt, "biased_quartic",
                             std::move(warnings));
}

namespace detail {

/// Monotone C1 half-cap rising from (0, 0) with slope sigma to (1, 1) with zero slope.
struct CapShape {
  double sigma;

  // Cubic Hermite is monotone only for sigma <= 3; steeper joins use 1 - (1 - u)^sigma.
  double value(double u) const {
    if (sigma <= 3.0) return sigma * (u * u * u - 2.0 * u * u + u) + (-2.0 * u * u * u + 3.0 * u * u);
    return 1.0 - std::pow(1.0 - u, sigma);
  }
  double slope(double u) const {
    if (sigma <= 3.0) return sigma * (3.0 * u * u - 4.0 * u + 1.0) + (-6.0 * u * u + 6.0 * u);
    return sigma * std::pow(1.0 - u, sigma - 1.0);
  }
};

}  // namespace detail

/// Two exactly parabolic wells joined by a C1 barrier cap whose maximum equals barrier_height.
inline DoubleWellPotential build_piecewise_parabolic(const WellParams& left_in, const WellParams& right_in,
                                                     std::pair<double, double> join_half_widths,
                                                     double barrier_height, const UnitsConfig& units) {
  units.validate();
  const auto [dl, dr] = join_half_widths;
  const WellParams left = WellParams::make(left_in.a, left_in.omega, left_in.v_min, dl, units);
  const WellParams right = WellParams::make(right_in.a, right_in.omega, right_in.v_min, dr, units);
  const double xjl = left.a + dl;
  const double xjr = right.a - dr;
  if (!(xjl < xjr)) fail(ErrorKind::construction, "parabolic joins overlap (a_L + d_L >= a_R - d_R)");
  const double m = units.mass;
  const double yl = left.v_min + 0.5 * m * left.omega * left.omega * dl * dl;
  const double yr = right.v_min + 0.5 * m * right.omega * right.omega * dr * dr;
  const double sl = m * left.omega * left.omega * dl;
  const double sr = m * right.omega * right.omega * dr;
  if (!(barrier_height > std::max(yl, yr))) {
    fail(ErrorKind::construction, "barrier_height must exceed the potential at both joins");
  }
  const double xm = 0.5 * (xjl + xjr);
  const double span_l = xm - xjl;
  const double span_r = xjr - xm;
  const double rise_l = barrier_height - yl;
  const double rise_r = barrier_height - yr;
  const detail::CapShape cap_l{sl * span_l / rise_l};
  const detail::CapShape cap_r{sr * span_r / rise_r};

  Evaluator ev = [=](double x) {
    if (x <= xjl) {
      const double t = x - left.a;
      return ValueSlope{left.v_min + 0.5 * m * left.omega * left.omega * t * t, m * left.omega * left.omega * t};
    }
    if (x >= xjr) {
      const double t = x - right.a;
      return ValueSlope{right.v_min + 0.5 * m * right.omega * right.omega * t * t,
                        m * right.omega * right.omega * t};
    }
    if (x <= xm) {
      const double u = (x - xjl) / span_l;
      return ValueSlope{yl + rise_l * cap_l.value(u), rise_l * cap_l.slope(u) / span_l};
    }
    const double u = (xjr - x) / span_r;
    return ValueSlope{yr + rise_r * cap_r.value(u), -rise_r * cap_r.slope(u) / span_r};
  };
  const BarrierTop top{xm, barrier_height};
  const double level = barrier_height + 10.0 * units.hbar * std::max(left.omega, right.omega);
  const Interval domain = detail::family_domain(ev, left.a, right.a, left.l, right.l, level);
  auto warnings = detail::barrier_warnings(left, right, top.v_top, units);
  return DoubleWellPotential(std::move(ev), left, right, domain, units, top, std::nullopt, "piecewise_parabolic",
                             std::move(warnings), {xjl, xm, xjr});
}

/// Black-box potential from tabulated samples, interpolated by a natural cubic spline.
inline DoubleWellPotential build_tabulated(std::span<const double> xs, std::span<const double> vs,
                                           const UnitsConfig& units, const CertificationOptions& cert = {}) {
  units.validate();
  auto spline = std::make_shared<const NaturalCubicSpline>(xs, vs);
  Evaluator ev = [spline](double x) {
    const auto s = (*spline)(x);
    return ValueSlope{s.value, s.slope};
  };
  const Interval domain{spline->front(), spline->back()};
  auto [left, right] = detail::locate_wells(ev, domain, units, cert);
  const BarrierTop top = detail::find_barrier_top(ev, left.a, right.a);
  auto warnings = detail::barrier_warnings(left, right, top.v_top, units);
  return DoubleWellPotential(std::move(ev), left, right, domain, units, top, std::nullopt, "tabulated",
                             std::move(warnings));
}

}  // namespace asymwell

#endif  // ASYMWELL_POTENTIAL_HPP

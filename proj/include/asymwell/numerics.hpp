#ifndef ASYMWELL_NUMERICS_HPP
#define ASYMWELL_NUMERICS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "asymwell/error.hpp"

namespace asymwell::numerics {

inline constexpr double pi = std::numbers::pi;

/// sin(pi x), exactly zero at integers and exactly +-1 at half-integers.
inline double sin_pi(double x) {
  double r = std::remainder(x, 2.0);  // r in [-1, 1]
  if (r == 0.0 || std::fabs(r) == 1.0) return 0.0;
  if (r == 0.5) return 1.0;
  if (r == -0.5) return -1.0;
  if (r > 0.5) r = 1.0 - r;
  else if (r < -0.5) r = -1.0 - r;
  return std::sin(pi * r);
}

/// cos(pi x), exactly zero at half-integers and exactly +-1 at integers.
inline double cos_pi(double x) {
  const double r = std::fabs(std::remainder(x, 2.0));  // r in [0, 1]
  if (r < 0.25) return std::cos(pi * r);
  return sin_pi(0.5 - r);
}

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

/// 1/Gamma(x); zero at the poles of Gamma.
inline double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x < 0.5) {
    return sin_pi(x) * std::tgamma(1.0 - x) / pi;
  }
  return 1.0 / std::tgamma(x);
}

/// nu! extended to real nu > -1 through Gamma(nu + 1).
inline double factorial_real(double nu) {
  if (!(nu > -1.0)) fail(ErrorKind::domain, "factorial_real: nu must exceed -1, got " + std::to_string(nu));
  return std::tgamma(nu + 1.0);
}

inline int parity_sign(int n) { return (n % 2 == 0) ? 1 : -1; }

/// Root of f on [lo, hi] where f(lo), f(hi) differ in sign (TOMS 748).
template <class F>
double find_root(F&& f, double lo, double hi, double flo, double fhi, int bits = 52,
                 std::uintmax_t max_iter = 200) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    fail(ErrorKind::solver, "find_root: interval does not bracket a sign change");
  }
  const double rel = std::ldexp(4.0, -bits);
  const double abs_floor = rel * std::max(std::fabs(lo), std::fabs(hi));
  auto tol = [rel, abs_floor](double a, double b) {
    return std::fabs(a - b) <= std::max(rel * std::min(std::fabs(a), std::fabs(b)), abs_floor);
  };
  std::uintmax_t iters = max_iter;
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  if (iters >= max_iter) fail(ErrorKind::solver, "find_root: iteration limit reached");
  // Return the endpoint with the smaller residual.
  return std::fabs(f(a)) <= std::fabs(f(b)) ? a : b;
}

template <class F>
double find_root(F&& f, double lo, double hi, int bits = 52) {
  return find_root(f, lo, hi, f(lo), f(hi), bits);
}

/// Double-exponential quadrature for integrands with endpoint singularities.
template <class F>
double integrate_tanh_sinh(F&& f, double a, double b, double tol = 1e-14, double* error = nullptr) {
  if (a == b) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  double err = 0.0;
  double l1 = 0.0;
  auto g = [&f](double x, double) { return f(x); };
  const double value = integrator.integrate(g, a, b, tol, &err, &l1);
  if (error != nullptr) *error = err;
  return value;
}

/// Adaptive Gauss-Kronrod quadrature for smooth integrands.
template <class F>
double integrate_smooth(F&& f, double a, double b, double tol = 1e-13, double* error = nullptr) {
  if (a == b) return 0.0;
  double err = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol, &err);
  if (error != nullptr) *error = err;
  return value;
}

/// Maximiser of a unimodal function on [lo, hi] (Brent's method).
template <class F>
std::pair<double, double> maximize(F&& f, double lo, double hi) {
  auto neg = [&](double x) { return -f(x); };
  std::uintmax_t iters = 200;
  auto [x, fx] = boost::math::tools::brent_find_minima(neg, lo, hi, 52, iters);
  return {x, -fx};
}

}  // namespace asymwell::numerics

#endif  // ASYMWELL_NUMERICS_HPP

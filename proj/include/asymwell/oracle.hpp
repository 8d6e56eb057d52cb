#ifndef ASYMWELL_ORACLE_HPP
#define ASYMWELL_ORACLE_HPP

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "asymwell/error.hpp"
#include "asymwell/potential.hpp"
#include "asymwell/quantize.hpp"

namespace asymwell {

/// Uniform grid with Dirichlet ends at x_lo and x_hi.
struct GridSpec {
  double x_lo = -10.0;
  double x_hi = 10.0;
  int n_points = 8001;

  double step() const { return (x_hi - x_lo) / (n_points - 1); }
  double x(int i) const { return x_lo + i * step(); }

  void validate() const {
    if (!(x_lo < x_hi)) fail(ErrorKind::config, "grid: x_lo must be below x_hi");
    if (n_points < 501) fail(ErrorKind::config, "grid: n_points must be at least 501");
  }
};

enum class Discretization { three_point, numerov_corrected };

inline const char* to_string(Discretization d) {
  return d == Discretization::three_point ? "three_point" : "numerov_corrected";
}

struct OracleOptions {
  Discretization scheme = Discretization::numerov_corrected;
  bool estimate_error = true;
};

struct SpectrumResult {
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenvectors;  // sampled on every grid node, ends included
  std::vector<double> error_estimates;             // empty unless requested
  GridSpec grid;
  Discretization scheme = Discretization::numerov_corrected;
};

namespace oracle_detail {

struct RawSpectrum {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
};

inline RawSpectrum tridiagonal_solve(const Evaluator& v, const GridSpec& grid, int count, const UnitsConfig& units,
                                     Discretization scheme) {
  const int n = grid.n_points - 2;
  const double h = grid.step();
  const double kinetic = units.hbar * units.hbar / (units.mass * h * h);
  std::vector<double> diag(n);
  std::vector<double> off(std::max(n - 1, 1), -0.5 * kinetic);
  std::vector<double> pot(n);
  for (int i = 0; i < n; ++i) {
    pot[i] = v(grid.x(i + 1)).value;
    diag[i] = kinetic + pot[i];
  }
  lapack_int found = 0;
  std::vector<double> w(n);
  std::vector<double> z(static_cast<std::size_t>(n) * count);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, diag.data(), off.data(), 0.0, 0.0, 1, count,
                                         LAPACKE_dlamch('S'), &found, w.data(), z.data(), n, support.data());
  if (info != 0 || found != count) {
    fail(ErrorKind::solver, "tridiagonal eigensolver failed (info=" + std::to_string(info) + ")");
  }
  RawSpectrum out;
  const double scale = 1.0 / std::sqrt(h);
  for (int k = 0; k < count; ++k) {
    std::vector<double> psi(grid.n_points, 0.0);
    const double* col = z.data() + static_cast<std::size_t>(k) * n;
    double peak = 0.0;
    for (int i = 0; i < n; ++i) peak = std::max(peak, std::fabs(col[i]));
    double sign = 1.0;
    for (int i = 0; i < n; ++i) {
      if (std::fabs(col[i]) > 1e-6 * peak) {
        sign = col[i] > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    for (int i = 0; i < n; ++i) psi[i + 1] = sign * scale * col[i];
    double e = w[k];
    if (scheme == Discretization::numerov_corrected) {
      // First-order correction for the h^2 error of the three-point Laplacian.
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d = pot[i] - e;
        sum += d * d * col[i] * col[i];
      }
      e += h * h / 12.0 * (2.0 * units.mass / (units.hbar * units.hbar)) * sum;
    }
    out.values.push_back(e);
    out.vectors.push_back(std::move(psi));
  }
  return out;
}

}  // namespace oracle_detail

/// Lowest `count` eigenpairs of -hbar^2/2m d^2/dx^2 + V on a uniform Dirichlet grid (no coverage check).
inline SpectrumResult solve_grid(const Evaluator& v, const GridSpec& grid, int count, const UnitsConfig& units,
                                 const OracleOptions& options = {}) {
  grid.validate();
  units.validate();
  if (count < 1 || count > 20) fail(ErrorKind::config, "oracle: count must lie in [1, 20]");
  auto raw = oracle_detail::tridiagonal_solve(v, grid, count, units, options.scheme);
  SpectrumResult out;
  out.grid = grid;
  out.scheme = options.scheme;
  out.eigenvalues = std::move(raw.values);
  out.eigenvectors = std::move(raw.vectors);
  if (options.estimate_error) {
    GridSpec coarse = grid;
    coarse.n_points = (grid.n_points - 1) / 2 + 1;
    if (coarse.n_points < 3) fail(ErrorKind::config, "oracle: grid too small for an error estimate");
    const auto c = oracle_detail::tridiagonal_solve(v, coarse, count, units, options.scheme);
    const double ratio = coarse.step() / grid.step();
    const double order = options.scheme == Discretization::three_point ? 2.0 : 4.0;
    for (int k = 0; k < count; ++k) {
      out.error_estimates.push_back(std::fabs(out.eigenvalues[k] - c.values[k]) / (std::pow(ratio, order) - 1.0));
    }
  }
  return out;
}

/// Oracle spectrum of a double well; the grid must leave 6 oscillator lengths of forbidden margin
/// and V at both ends at least 5 hbar*omega above the highest requested eigenvalue.
inline SpectrumResult solve_spectrum(const DoubleWellPotential& potential, const GridSpec& grid, int count,
                                     const OracleOptions& options = {}) {
  grid.validate();
  const Interval dom = potential.domain();
  if (grid.x_lo < dom.lo - 1e-12 * std::fabs(dom.lo) || grid.x_hi > dom.hi + 1e-12 * std::fabs(dom.hi)) {
    fail(ErrorKind::coverage, "oracle: grid extends beyond the potential's domain");
  }
  if (!(grid.x_lo < potential.left().a && potential.right().a < grid.x_hi)) {
    fail(ErrorKind::coverage, "oracle: grid does not contain both minima");
  }
  SpectrumResult out = solve_grid(potential.evaluator(), grid, count, potential.units(), options);
  const double e_max = out.eigenvalues.back();
  const double quantum = potential.max_quantum();
  if (potential.value(grid.x_lo) < e_max + 5.0 * quantum || potential.value(grid.x_hi) < e_max + 5.0 * quantum) {
    fail(ErrorKind::coverage, "oracle: V at the grid edges is less than 5 hbar*omega above the highest eigenvalue");
  }
  const auto [outer_lo, outer_hi] = outer_turning_points(potential, e_max);
  if (outer_lo - grid.x_lo < 6.0 * potential.left().l || grid.x_hi - outer_hi < 6.0 * potential.right().l) {
    fail(ErrorKind::coverage, "oracle: less than 6 oscillator lengths of forbidden margin at a grid edge");
  }
  return out;
}

/// Grid spanning the potential's domain.
inline GridSpec auto_grid(const DoubleWellPotential& potential, int n_points = 8001) {
  return {potential.domain().lo, potential.domain().hi, n_points};
}

inline double pair_splitting(const SpectrumResult& spectrum, int pair_index) {
  if (pair_index < 0 || 2 * pair_index + 1 >= static_cast<int>(spectrum.eigenvalues.size())) {
    fail(ErrorKind::domain, "pair_splitting: pair index out of range");
  }
  return spectrum.eigenvalues[2 * pair_index + 1] - spectrum.eigenvalues[2 * pair_index];
}

/// Trapezoid probabilities on either side of c.
inline std::pair<double, double> probability_split(const std::vector<double>& eigenvector, const GridSpec& grid,
                                                   double c) {
  if (!(c >= grid.x_lo && c <= grid.x_hi)) fail(ErrorKind::domain, "probability_split: c outside the grid");
  const double h = grid.step();
  const int n = grid.n_points;
  if (static_cast<int>(eigenvector.size()) != n) fail(ErrorKind::domain, "probability_split: size mismatch");
  double total = 0.0;
  double left = 0.0;
  const int cell = std::min(n - 2, static_cast<int>(std::floor((c - grid.x_lo) / h)));
  for (int i = 0; i + 1 < n; ++i) {
    const double p0 = eigenvector[i] * eigenvector[i];
    const double p1 = eigenvector[i + 1] * eigenvector[i + 1];
    const double area = 0.5 * h * (p0 + p1);
    total += area;
    if (i < cell) {
      left += area;
    } else if (i == cell) {
      const double t = (c - grid.x(i)) / h;
      const double pc = p0 + t * (p1 - p0);
      left += 0.5 * t * h * (p0 + pc);
    }
  }
  return {left / total, (total - left) / total};
}

enum class PairClass { tunneling_pair, localized_single };

inline const char* to_string(PairClass k) {
  return k == PairClass::tunneling_pair ? "tunneling_pair" : "localized_single";
}

struct PairClassification {
  PairClass kind = PairClass::tunneling_pair;
  int lower_index = 0;
  int upper_index = 1;
  double lower_energy = 0.0;
  double upper_energy = 0.0;
  double gap = 0.0;
  std::pair<double, double> lower_split;
  std::pair<double, double> upper_split;
};

/// Classifies the two oracle states nearest (eps_L + eps_R)/2 as a tunneling pair (both states
/// carry at least `min_prob` in each well) or as localized singles.
inline PairClassification resolve_pair_or_single(const SpectrumResult& spectrum, const DoubleWellPotential& potential,
                                                 int n_l, int n_r, double min_prob = 0.05) {
  const UnitsConfig& u = potential.units();
  const double e_ref = 0.5 * (epsilon_level(potential.left(), n_l, u) + epsilon_level(potential.right(), n_r, u));
  const int count = static_cast<int>(spectrum.eigenvalues.size());
  if (count < 2) fail(ErrorKind::domain, "resolve_pair_or_single: need at least two states");
  std::vector<int> order(count);
  for (int i = 0; i < count; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::fabs(spectrum.eigenvalues[a] - e_ref) < std::fabs(spectrum.eigenvalues[b] - e_ref);
  });
  PairClassification out;
  out.lower_index = std::min(order[0], order[1]);
  out.upper_index = std::max(order[0], order[1]);
  out.lower_energy = spectrum.eigenvalues[out.lower_index];
  out.upper_energy = spectrum.eigenvalues[out.upper_index];
  out.gap = out.upper_energy - out.lower_energy;
  const double c = potential.c();
  out.lower_split = probability_split(spectrum.eigenvectors[out.lower_index], spectrum.grid, c);
  out.upper_split = probability_split(spectrum.eigenvectors[out.upper_index], spectrum.grid, c);
  const double weakest = std::min({out.lower_split.first, out.lower_split.second, out.upper_split.first,
                                   out.upper_split.second});
  out.kind = weakest >= min_prob ? PairClass::tunneling_pair : PairClass::localized_single;
  return out;
}

struct TailSample {
  double value;
  double slope;
};

using Tail = std::function<TailSample(double)>;

/// Linear combination of oracle eigenvectors, sampled at the nearest grid node with a
/// five-point central-difference slope.
inline Tail eigenvector_tail(const SpectrumResult& spectrum, std::vector<std::pair<int, double>> combination) {
  const GridSpec grid = spectrum.grid;
  std::vector<double> psi(grid.n_points, 0.0);
  for (const auto& [index, weight] : combination) {
    if (index < 0 || index >= static_cast<int>(spectrum.eigenvectors.size())) {
      fail(ErrorKind::domain, "eigenvector_tail: index out of range");
    }
    for (int i = 0; i < grid.n_points; ++i) psi[i] += weight * spectrum.eigenvectors[index][i];
  }
  return [grid, psi = std::move(psi)](double x) {
    const double h = grid.step();
    const int i = static_cast<int>(std::lround((x - grid.x_lo) / h));
    if (i < 2 || i > grid.n_points - 3) fail(ErrorKind::domain, "eigenvector_tail: x too close to the grid edge");
    const double slope = (psi[i - 2] - 8.0 * psi[i - 1] + 8.0 * psi[i + 1] - psi[i + 2]) / (12.0 * h);
    return TailSample{psi[i], slope};
  };
}

inline void write_spectrum_csv(std::ostream& os, const SpectrumResult& spectrum) {
  os.precision(17);
  os << "index,eigenvalue\n";
  for (std::size_t k = 0; k < spectrum.eigenvalues.size(); ++k) os << k << ',' << spectrum.eigenvalues[k] << '\n';
}

inline void write_eigenvectors_csv(std::ostream& os, const SpectrumResult& spectrum) {
  os.precision(17);
  os << "x";
  for (std::size_t k = 0; k < spectrum.eigenvectors.size(); ++k) os << ",psi" << k;
  os << '\n';
  for (int i = 0; i < spectrum.grid.n_points; ++i) {
    os << spectrum.grid.x(i);
    for (const auto& v : spectrum.eigenvectors) os << ',' << v[i];
    os << '\n';
  }
}

}  // namespace asymwell

#endif  // ASYMWELL_ORACLE_HPP

#ifndef ASYMWELL_QUANTIZE_HPP
#define ASYMWELL_QUANTIZE_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "asymwell/error.hpp"
#include "asymwell/numerics.hpp"
#include "asymwell/potential.hpp"
#include "asymwell/specfun.hpp"
#include "asymwell/wkb_matching.hpp"

namespace asymwell {

/// E split into well quantum numbers and offsets about the reference E_ref = (eps_L + eps_R) / 2.
struct EnergyDecomposition {
  double energy = 0.0;
  double nu_l = 0.0;
  double nu_r = 0.0;
  int n_l = 0;
  int n_r = 0;
  double delta_nl = 0.0;
  double delta_nr = 0.0;
  double delta_l = 0.0;
  double eps_l = 0.0;
  double eps_r = 0.0;
  double delta_eps = 0.0;
};

enum class SolveMethod { root_exact, quadratic_approx };

inline const char* to_string(SolveMethod m) { return m == SolveMethod::root_exact ? "root_exact" : "quadratic_approx"; }

struct PairSolution {
  double e_plus = 0.0;
  double e_minus = 0.0;
  double delta_split = 0.0;  // degenerate splitting Delta
  double delta_e = 0.0;      // E_+ - E_-
  SolveMethod method = SolveMethod::root_exact;
  EnergyDecomposition decomposition_plus;
  EnergyDecomposition decomposition_minus;
  double action = 0.0;  // barrier action at E_ref
};

struct LocalizationReport {
  double ratio_r = 0.0;
  double amp_ratio_sq = 0.0;
  Branch branch = Branch::left_anchored;
  double nu_l = 0.0;
  double nu_r = 0.0;
  std::optional<double> left_prob;
  std::optional<double> right_prob;
};

/// Tunable constants of the pair solvers, in units of hbar * min(omega).
struct PairOptions {
  double near_degeneracy = 0.25;
  double window = 1.0 / 3.0;
  int scan_points = 200;
};

inline double nu_of_energy(const WellParams& well, double energy, const UnitsConfig& units) {
  return (energy - well.v_min) / (units.hbar * well.omega) - 0.5;
}

inline double epsilon_level(const WellParams& well, int n, const UnitsConfig& units) {
  if (n < 0) fail(ErrorKind::domain, "epsilon_level: n must be non-negative");
  return well.v_min + (n + 0.5) * units.hbar * well.omega;
}

namespace quantize_detail {

struct Reference {
  double eps_l;
  double eps_r;
  double e_ref;
  double delta_nl;
  double delta_nr;
  double quantum_l;
  double quantum_r;
};

inline Reference reference(const DoubleWellPotential& pot, int n_l, int n_r) {
  if (n_l < 0 || n_r < 0) fail(ErrorKind::domain, "level indices must be non-negative");
  const UnitsConfig& u = pot.units();
  Reference r;
  r.eps_l = epsilon_level(pot.left(), n_l, u);
  r.eps_r = epsilon_level(pot.right(), n_r, u);
  r.e_ref = 0.5 * (r.eps_l + r.eps_r);
  r.quantum_l = pot.left().quantum(u);
  r.quantum_r = pot.right().quantum(u);
  r.delta_nl = 0.5 * (r.eps_r - r.eps_l) / r.quantum_l;
  r.delta_nr = 0.5 * (r.eps_l - r.eps_r) / r.quantum_r;
  return r;
}

inline EnergyDecomposition decompose(const Reference& r, int n_l, int n_r, double delta_l) {
  EnergyDecomposition d;
  d.energy = r.e_ref + r.quantum_l * delta_l;
  d.n_l = n_l;
  d.n_r = n_r;
  d.delta_nl = r.delta_nl;
  d.delta_nr = r.delta_nr;
  d.delta_l = delta_l;
  d.nu_l = n_l + r.delta_nl + delta_l;
  d.nu_r = n_r + r.delta_nr + (r.quantum_l / r.quantum_r) * delta_l;
  d.eps_l = r.eps_l;
  d.eps_r = r.eps_r;
  d.delta_eps = r.eps_l - r.eps_r;
  return d;
}

inline void check_band(const DoubleWellPotential& pot, double energy) {
  const double floor = std::max(pot.left().v_min, pot.right().v_min);
  if (!(energy > floor)) fail(ErrorKind::domain, "energy " + std::to_string(energy) + " lies below a well floor");
  if (!(energy < pot.top().v_top)) fail(ErrorKind::no_barrier, "energy " + std::to_string(energy) + " is not below the barrier top");
}

/// Barrier action at E summed over the c split of the potential.
inline double action_at(const DoubleWellPotential& pot, double energy) { return barrier_action(pot, energy).total; }

/// sin(pi nu) and cos(pi nu) for nu = n + frac, computed from the small offset.
inline std::pair<double, double> sin_cos_offset(int n, double frac) {
  const int sign = numerics::parity_sign(n);
  return {sign * numerics::sin_pi(frac), sign * numerics::cos_pi(frac)};
}

}  // namespace quantize_detail

/// f(E) = tan(pi nu_L) tan(pi nu_R) - g_{nu_L} g_{nu_R} e^{-2S} / 4.
inline double quantization_residual(const DoubleWellPotential& potential, double energy) {
  quantize_detail::check_band(potential, energy);
  const UnitsConfig& u = potential.units();
  const double nu_l = nu_of_energy(potential.left(), energy, u);
  const double nu_r = nu_of_energy(potential.right(), energy, u);
  const double cl = numerics::cos_pi(nu_l);
  const double cr = numerics::cos_pi(nu_r);
  if (cl == 0.0 || cr == 0.0) fail(ErrorKind::singular_input, "quantization_residual: half-integer nu");
  const double s = quantize_detail::action_at(potential, energy);
  const double rhs = 0.25 * specfun_detail::g_factor_extended(nu_l) * specfun_detail::g_factor_extended(nu_r) *
                     std::exp(-2.0 * s);
  return numerics::sin_pi(nu_l) / cl * (numerics::sin_pi(nu_r) / cr) - rhs;
}

/// Degenerate splitting Delta = (hbar/pi) sqrt(g_nL g_nR omega_L omega_R) e^{-S}, with S at E_ref.
inline double splitting_degenerate(const DoubleWellPotential& potential, int n_l, int n_r,
                                   const PairOptions& options = {}) {
  const auto r = quantize_detail::reference(potential, n_l, n_r);
  const double dq = potential.min_quantum();
  if (!(std::fabs(r.eps_l - r.eps_r) < options.near_degeneracy * dq)) {
    fail(ErrorKind::precondition, "splitting_degenerate: eps_L and eps_R are not degenerate");
  }
  quantize_detail::check_band(potential, r.e_ref);
  const double s = quantize_detail::action_at(potential, r.e_ref);
  const UnitsConfig& u = potential.units();
  return u.hbar / numerics::pi *
         std::sqrt(g_factor(n_l) * g_factor(n_r) * potential.left().omega * potential.right().omega) * std::exp(-s);
}

/// Both roots of the quantization condition near (eps_L + eps_R) / 2.
inline PairSolution solve_pair_exact(const DoubleWellPotential& potential, int n_l, int n_r,
                                     const PairOptions& options = {}) {
  using namespace quantize_detail;
  const Reference r = reference(potential, n_l, n_r);
  const double dq = potential.min_quantum();
  if (!(std::fabs(r.eps_l - r.eps_r) < options.near_degeneracy * dq)) {
    fail(ErrorKind::near_degeneracy, "solve_pair_exact: |eps_L - eps_R| exceeds the near-degeneracy threshold");
  }
  const double half_width = options.window * dq / r.quantum_l;  // in delta_L units
  const double ratio = r.quantum_l / r.quantum_r;
  check_band(potential, r.e_ref + r.quantum_l * half_width);
  check_band(potential, r.e_ref - r.quantum_l * half_width);

  // Pole-free form sin sin - rhs cos cos.
  auto frac_l = [&](double d) { return r.delta_nl + d; };
  auto frac_r = [&](double d) { return r.delta_nr + ratio * d; };
  auto scaled = [&](double d) {
    const double e = r.e_ref + r.quantum_l * d;
    const auto [sl, cl] = sin_cos_offset(n_l, frac_l(d));
    const auto [sr, cr] = sin_cos_offset(n_r, frac_r(d));
    const double nu_l = n_l + frac_l(d);
    const double nu_r = n_r + frac_r(d);
    const double rhs = 0.25 * specfun_detail::g_factor_extended(nu_l) * specfun_detail::g_factor_extended(nu_r) *
                       std::exp(-2.0 * action_at(potential, e));
    return sl * sr - rhs * cl * cr;
  };

  std::vector<double> nodes;
  for (int i = 0; i <= options.scan_points; ++i) nodes.push_back(-half_width + 2.0 * half_width * i / options.scan_points);
  for (double d : {-r.delta_nl, -r.delta_nr / ratio}) {
    if (d > -half_width && d < half_width) nodes.push_back(d);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  auto crosses_half = [](double a, double b) { return std::floor(a + 0.5) != std::floor(b + 0.5); };
  std::vector<double> values(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) values[i] = scaled(nodes[i]);
  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double a = nodes[i];
    const double b = nodes[i + 1];
    if ((values[i] > 0.0) == (values[i + 1] > 0.0) && values[i] != 0.0) continue;
    if (crosses_half(frac_l(a), frac_l(b)) || crosses_half(frac_r(a), frac_r(b))) continue;
    roots.push_back(numerics::find_root(scaled, a, b, values[i], values[i + 1]));
  }
  if (roots.size() < 2) {
    fail(ErrorKind::degeneracy_structure, "solve_pair_exact: found " + std::to_string(roots.size()) +
                                              " root(s) in the window; the level is likely a localized single state");
  }
  if (roots.size() > 2) {
    std::sort(roots.begin(), roots.end(), [](double x, double y) { return std::fabs(x) < std::fabs(y); });
    roots.resize(2);
  }
  std::sort(roots.begin(), roots.end());
  PairSolution out;
  out.method = SolveMethod::root_exact;
  out.decomposition_minus = decompose(r, n_l, n_r, roots[0]);
  out.decomposition_plus = decompose(r, n_l, n_r, roots[1]);
  out.e_minus = out.decomposition_minus.energy;
  out.e_plus = out.decomposition_plus.energy;
  out.delta_e = r.quantum_l * (roots[1] - roots[0]);
  out.action = action_at(potential, r.e_ref);
  out.delta_split = splitting_degenerate(potential, n_l, n_r, options);
  return out;
}

/// Roots of the quadratic approximation to the quantization condition.
inline PairSolution solve_pair_quadratic(const DoubleWellPotential& potential, int n_l, int n_r,
                                         const PairOptions& options = {}) {
  using namespace quantize_detail;
  const Reference r = reference(potential, n_l, n_r);
  const double dq = potential.min_quantum();
  if (!(std::fabs(r.eps_l - r.eps_r) < options.near_degeneracy * dq)) {
    fail(ErrorKind::near_degeneracy, "solve_pair_quadratic: |eps_L - eps_R| exceeds the near-degeneracy threshold");
  }
  check_band(potential, r.e_ref);
  const double s = action_at(potential, r.e_ref);
  const double k = potential.right().omega / potential.left().omega;
  const double amp = std::sqrt(g_factor(n_l) * g_factor(n_r)) / (2.0 * numerics::pi) * std::exp(-s);
  const double rhs = k * amp * amp;
  // (d + k dnR)(d + dnL) = rhs
  const double b = k * r.delta_nr + r.delta_nl;
  const double gap = k * r.delta_nr - r.delta_nl;
  const double disc = gap * gap + 4.0 * rhs;
  if (!(disc >= 0.0)) fail(ErrorKind::internal, "solve_pair_quadratic: negative discriminant");
  const double root = std::sqrt(disc);
  const double d_plus = 0.5 * (-b + root);
  const double d_minus = 0.5 * (-b - root);
  PairSolution out;
  out.method = SolveMethod::quadratic_approx;
  out.decomposition_plus = decompose(r, n_l, n_r, d_plus);
  out.decomposition_minus = decompose(r, n_l, n_r, d_minus);
  out.delta_e = r.quantum_l * root;
  const double mid = 0.5 * (r.eps_l + r.eps_r);
  out.e_plus = mid + 0.5 * out.delta_e;
  out.e_minus = mid - 0.5 * out.delta_e;
  out.decomposition_plus.energy = out.e_plus;
  out.decomposition_minus.energy = out.e_minus;
  out.action = s;
  out.delta_split = potential.units().hbar / numerics::pi *
                    std::sqrt(g_factor(n_l) * g_factor(n_r) * potential.left().omega * potential.right().omega) *
                    std::exp(-s);
  return out;
}

/// Decomposition of an arbitrary energy against levels (n_l, n_r).
inline EnergyDecomposition decompose_energy(const DoubleWellPotential& potential, double energy, int n_l, int n_r) {
  const auto r = quantize_detail::reference(potential, n_l, n_r);
  return quantize_detail::decompose(r, n_l, n_r, (energy - r.e_ref) / r.quantum_l);
}

namespace quantize_detail {

/// Integral of D_nu(z)^2 over the classically allowed window |z| <= sqrt(4 nu + 2).
inline double allowed_norm(double nu) {
  const double edge = std::sqrt(4.0 * nu + 2.0);
  auto f = [nu](double z) {
    const double d = pcf_d(nu, z).value;
    return d * d;
  };
  return numerics::integrate_smooth(f, -edge, 0.0) + numerics::integrate_smooth(f, 0.0, edge);
}

}  // namespace quantize_detail

/// R = |C_L/C_R|^2 (l_L/l_R) times the ratio of allowed-window norms of D_nu_L and D_nu_R.
inline LocalizationReport localization_report(const DoubleWellPotential& potential, double energy, Branch branch) {
  const AmplitudeRatio amp = amplitude_ratio(potential, energy, branch);
  LocalizationReport out;
  out.branch = branch;
  out.nu_l = amp.nu_l;
  out.nu_r = amp.nu_r;
  out.amp_ratio_sq = amp.ratio * amp.ratio;
  const double norm_l = quantize_detail::allowed_norm(amp.nu_l);
  const double norm_r = quantize_detail::allowed_norm(amp.nu_r);
  out.ratio_r = out.amp_ratio_sq * (potential.left().l / potential.right().l) * norm_l / norm_r;
  return out;
}

}  // namespace asymwell

#endif  // ASYMWELL_QUANTIZE_HPP

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dirac1d/moments.hpp"
#include "dirac1d/propagator.hpp"

namespace dirac1d {

struct MassComparison {
  double q = 0.0;
  std::vector<double> T_values;
  std::vector<double> sup_diff;  // sup_{t <= T} |M_q(m, t) - M_q(m', t)|
  double t_exponent = std::numeric_limits<double>::quiet_NaN();
  bool boundary_contaminated = false;
};

// Evolves delta_0^+ under D(m, c) and D(m', c) with the same potential and
// tabulates the running sup of the moment difference at each requested T.
// The shared time grid has step T_min/200.
inline MassComparison mass_comparison(double m, double m_prime, double c,
                                      const Realization& omega, double q,
                                      const std::vector<double>& t_grid) {
  if (!(q > 0.0)) throw std::invalid_argument("mass_comparison: q must be > 0");
  if (t_grid.empty()) throw std::invalid_argument("mass_comparison: empty T grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0)) throw std::invalid_argument("mass_comparison: T must be > 0");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("mass_comparison: T grid must increase");
  }
  if (!omega.window.contains(0))
    throw std::invalid_argument("mass_comparison: window must contain the origin");

  const auto op_a = build_dirac(DiracParams(m, c), omega);
  const auto op_b = build_dirac(DiracParams(m_prime, c), omega);
  const Propagator prop_a = chebyshev_propagator(op_a);
  const Propagator prop_b = chebyshev_propagator(op_b);

  MassComparison out;
  out.q = q;
  out.T_values = t_grid;
  out.sup_diff.assign(t_grid.size(), 0.0);

  const double t_max = t_grid.back();
  const double r = std::max(prop_a.radius, prop_b.radius);
  const long half = std::min(-omega.window.n_min, omega.window.n_max);
  if (static_cast<double>(half) < 1.2 * r * t_max + 20.0) out.boundary_contaminated = true;

  const std::vector<double> weights = position_weights(q, omega.window);
  auto weighted = [&](const SpinorState& s) {
    double acc = 0.0;
    for (long n = s.window.n_min; n <= s.window.n_max; ++n)
      acc += weights[s.window.index(n)] * s.site_mass(n);
    return acc;
  };

  SpinorState psi_a = SpinorState::delta_plus(omega.window, 0);
  SpinorState psi_b = psi_a;
  const double h = t_grid.front() / 200.0;
  const long steps = static_cast<long>(std::ceil(t_max / h - 1e-9));
  double sup = 0.0;
  std::size_t slot = 0;
  for (long k = 0; k <= steps; ++k) {
    const double t = std::min(k * h, t_max);
    if (k > 0) {
      psi_a = evolve_split(prop_a, psi_a, t - (k - 1) * h);
      psi_b = evolve_split(prop_b, psi_b, t - (k - 1) * h);
    }
    while (slot < t_grid.size() && t > t_grid[slot] + 1e-12) {
      out.sup_diff[slot] = sup;
      ++slot;
    }
    sup = std::max(sup, std::abs(weighted(psi_a) - weighted(psi_b)));
    if (boundary_mass_fraction(psi_a) >= 1e-8 || boundary_mass_fraction(psi_b) >= 1e-8)
      out.boundary_contaminated = true;
  }
  while (slot < t_grid.size()) out.sup_diff[slot++] = sup;

  bool fittable = t_grid.size() >= 2;
  for (double s : out.sup_diff) fittable = fittable && s > 0.0;
  if (fittable) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      mx += std::log(t_grid[i]);
      my += std::log(out.sup_diff[i]);
    }
    mx /= static_cast<double>(t_grid.size());
    my /= static_cast<double>(t_grid.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      num += (std::log(t_grid[i]) - mx) * (std::log(out.sup_diff[i]) - my);
      den += (std::log(t_grid[i]) - mx) * (std::log(t_grid[i]) - mx);
    }
    if (den > 0.0) out.t_exponent = num / den;
  }
  return out;
}

}  // namespace dirac1d

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dirac1d/greens.hpp"
#include "dirac1d/moments.hpp"
#include "dirac1d/propagator.hpp"

namespace dirac1d {

struct LaplaceMoment {
  double q = 0.0;
  double T = 0.0;
  double value = 0.0;
  bool boundary_contaminated = false;
};

namespace detail {

// Trapezoid quadrature of (1/T) e^{-2t/T} M(t) on [0, t_max] with step <=
// T/64; t_max truncates the tail below tol_rel relative to the weight of
// m_max. Nodes are visited in ascending order so the callback can evolve
// incrementally.
template <class F>
double laplace_time_quadrature(F&& mval, double T, double m_max, double tol_rel = 1e-8) {
  if (!(T > 0.0)) throw std::invalid_argument("laplace quadrature: T must be > 0");
  if (!(m_max > 0.0) || !(tol_rel > 0.0))
    throw std::invalid_argument("laplace quadrature: bad bound or tolerance");
  const double t_max = std::max(T, 0.5 * T * std::log(m_max * T / tol_rel));
  const int steps = static_cast<int>(std::ceil(t_max / (T / 64.0)));
  const double h = t_max / steps;
  double acc = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double t = i * h;
    const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
    acc += w * std::exp(-2.0 * t / T) * mval(t);
  }
  return acc * h / T;
}

}  // namespace detail

// Time route: evolve and average the moment with weight (1/T) e^{-2t/T}.
inline LaplaceMoment laplace_moment_time(const Propagator& prop, const SpinorState& psi, double q,
                                         double T) {
  if (!(q >= 0.0)) throw std::invalid_argument("laplace_moment_time: q must be >= 0");
  const std::vector<double> weights = position_weights(q, psi.window);
  double w_max = 0.0;
  for (double w : weights) w_max = std::max(w_max, w);
  const double m_max = std::max(w_max * psi.squared_norm(), 1e-300);

  LaplaceMoment out;
  out.q = q;
  out.T = T;
  SpinorState cur = psi;
  double t_cur = 0.0;
  out.value = detail::laplace_time_quadrature(
      [&](double t) {
        cur = evolve_split(prop, cur, t - t_cur);
        t_cur = t;
        if (boundary_mass_fraction(cur) >= 1e-8) out.boundary_contaminated = true;
        double acc = 0.0;
        for (long n = cur.window.n_min; n <= cur.window.n_max; ++n)
          acc += weights[cur.window.index(n)] * cur.site_mass(n);
        return acc;
      },
      T, m_max);
  return out;
}

struct EnergyGrid {
  double lo = 0.0;
  double hi = 0.0;
  int initial_nodes = 0;
};

// Covers the spectrum with enough padding that the off-spectrum tail of the
// integrand falls below the quadrature tolerance, and starts with node
// spacing fine enough for the Lorentzian width 1/T. For q > 0 the site-zero
// weight vanishes, the integrand decays like 1/E^4 off the spectrum, and the
// design padding 2/T + 1 suffices; at q = 0 the decay is only 1/E^2 and the
// padding grows to keep the missing tail near 0.3%.
inline EnergyGrid default_energy_grid(const OperatorMatrix& op, double T, double q = 2.0) {
  if (!(T > 0.0)) throw std::invalid_argument("default_energy_grid: T must be > 0");
  const double pad = q > 0.0 ? 2.0 / T + 1.0 : std::max(2.0 / T + 1.0, 215.0 / T);
  const double b = op.spectral_radius_bound() + pad;
  const int n0 = std::max(257, static_cast<int>(std::ceil(4.0 * b * T)) + 1);
  return {-b, b, n0};
}

// Energy route for psi = delta_0^+:
//   A = (1/2piT) sum_n |n|^q int (|G+(E+i/T; n)|^2 + |G-(E+i/T; n)|^2) dE
// by trapezoid refinement until successive estimates differ by < 0.5%.
inline LaplaceMoment laplace_moment_energy(const OperatorMatrix& op, double q, double T,
                                           const EnergyGrid& grid, int max_refinements = 14) {
  if (!(T > 0.0)) throw std::invalid_argument("laplace_moment_energy: T must be > 0");
  if (!(q >= 0.0)) throw std::invalid_argument("laplace_moment_energy: q must be >= 0");
  if (!(grid.lo < grid.hi) || grid.initial_nodes < 9)
    throw std::invalid_argument("laplace_moment_energy: bad grid");
  const double pad = 2.0 / T + 1.0;
  const double need = op.spectral_radius_bound() + pad;
  if (grid.lo > -need + 1e-9 || grid.hi < need - 1e-9)
    throw std::invalid_argument("laplace_moment_energy: grid does not cover the padded spectrum");

  const std::vector<double> weights = position_weights(q, op.window);
  const auto integrand = [&](double e) {
    const GreensColumn g = greens_column(op, cdouble(e, 1.0 / T));
    double acc = 0.0;
    for (long n = op.window.n_min; n <= op.window.n_max; ++n)
      acc += weights[op.window.index(n)] * (std::norm(g.plus(n)) + std::norm(g.minus(n)));
    return acc;
  };

  const int n0 = grid.initial_nodes;
  double h = (grid.hi - grid.lo) / (n0 - 1);
  double sum = 0.5 * (integrand(grid.lo) + integrand(grid.hi));
  for (int i = 1; i + 1 < n0; ++i) sum += integrand(grid.lo + i * h);
  double estimate = sum * h;
  long intervals = n0 - 1;
  bool settled = false;
  for (int level = 0; level < max_refinements && !settled; ++level) {
    double mid_sum = 0.0;
    for (long i = 0; i < intervals; ++i) mid_sum += integrand(grid.lo + (i + 0.5) * h);
    const double refined = 0.5 * estimate + 0.5 * h * mid_sum;
    settled = std::abs(refined - estimate) < 0.005 * std::max(std::abs(refined), 1e-300);
    estimate = refined;
    intervals *= 2;
    h *= 0.5;
  }
  if (!settled) throw ContractError("laplace_moment_energy: quadrature did not settle");

  LaplaceMoment out;
  out.q = q;
  out.T = T;
  out.value = estimate / (2.0 * std::numbers::pi * T);
  return out;
}

}  // namespace dirac1d

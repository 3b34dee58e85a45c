#pragma once

// Dense eigendecomposition of the finite-window operators and the
// exponential-decay fit of eigenvectors.

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "operator.hpp"

namespace dirac1d {

inline Eigen::MatrixXd to_dense(const OperatorMatrix& op) {
  const auto n = static_cast<Eigen::Index>(op.dim());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = std::max<Eigen::Index>(0, i - op.bandwidth);
         j <= std::min(n - 1, i + op.bandwidth); ++j)
      a(i, j) = op.entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return a;
}

struct EigenSystem {
  LatticeWindow window;
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // orthonormal columns, interleaved component order

  std::size_t count() const { return static_cast<std::size_t>(values.size()); }

  SpinorState state(std::size_t j) const {
    SpinorState s(window);
    for (std::size_t i = 0; i < s.amp.size(); ++i)
      s.amp[i] = vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return s;
  }
};

// Full symmetric eigendecomposition. Guarded by a dense size limit; larger
// windows should go through the polynomial propagator or the banded Green's
// function solves instead.
inline EigenSystem eigensolve(const OperatorMatrix& op, long dense_site_limit = 2000) {
  if (op.window.sites() > dense_site_limit)
    throw std::invalid_argument(
        "eigensolve: window exceeds the dense limit; use the propagator or Green's-function path");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_dense(op));
  if (solver.info() != Eigen::Success) throw ContractError("eigensolve: iteration failed");
  EigenSystem sys{op.window, solver.eigenvalues(), solver.eigenvectors()};

  // spot check the residual contract on a few pairs
  const std::size_t n = op.dim();
  const double scale = op.spectral_radius_bound();
  std::vector<double> x(n), y(n);
  const std::size_t stride = std::max<std::size_t>(1, n / 7);
  for (std::size_t j = 0; j < n; j += stride) {
    for (std::size_t i = 0; i < n; ++i)
      x[i] = sys.vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    op.apply(x.data(), y.data());
    double rsq = 0.0;
    const double lambda = sys.values(static_cast<Eigen::Index>(j));
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - lambda * x[i];
      rsq += r * r;
    }
    if (std::sqrt(rsq) > 1e-9 * std::max(1.0, scale))
      throw ContractError("eigensolve: residual contract violated");
  }
  return sys;
}

struct DecayFit {
  long center = 0;        // site of the largest spinor mass
  double rate = 0.0;      // per-site decay exponent, clamped at 0
  double fit_quality = 0.0;  // R^2 of the log-linear regression
};

// Least squares of log ||phi(n)|| against |n - center|. Sites within 5 of the
// window edge are excluded (zero-BC contamination), as are sites whose mass
// has underflowed below 1e-13 of the peak.
inline DecayFit decay_fit(const SpinorState& vec) {
  const LatticeWindow& w = vec.window;
  if (w.sites() < 8) throw std::invalid_argument("decay_fit: need at least 8 sites");
  double peak = 0.0;
  long center = w.n_min;
  for (long n = w.n_min; n <= w.n_max; ++n) {
    const double m = vec.site_mass(n);
    if (m > peak) {
      peak = m;
      center = n;
    }
  }
  if (peak == 0.0) throw std::invalid_argument("decay_fit: zero vector");

  const double floor = 1e-13 * 1e-13 * peak;  // site_mass is a squared amplitude
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  long count = 0;
  const long margin = 5;
  for (long n = w.n_min + margin; n <= w.n_max - margin; ++n) {
    const double m = vec.site_mass(n);
    if (m <= floor) continue;
    const double x = std::abs(static_cast<double>(n - center));
    const double y = 0.5 * std::log(m);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    ++count;
  }
  DecayFit fit;
  fit.center = center;
  if (count < 2) return fit;  // flat or single usable point: rate 0
  const double denom = count * sxx - sx * sx;
  if (denom <= 0.0) return fit;
  const double slope = (count * sxy - sx * sy) / denom;
  fit.rate = std::max(0.0, -slope);
  const double ss_tot = syy - sy * sy / count;
  const double ss_res = ss_tot - slope * (sxy - sx * sy / count);
  fit.fit_quality = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace dirac1d

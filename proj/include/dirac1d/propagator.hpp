#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "dirac1d/eigen.hpp"
#include "dirac1d/operator.hpp"

namespace dirac1d {

// Thrown when a single Chebyshev step would need more terms than the
// configured cap; the caller splits the time step.
struct StepTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class PropagatorMethod { EigenBasis, Chebyshev };

namespace detail {

// Bessel coefficients J_0(x)..J_K(x) by downward recurrence, normalized with
// J_0 + 2*sum J_{2k} = 1. K is chosen so the dropped tail is below 1e-14.
inline std::vector<double> bessel_coeffs(double x, int max_order) {
  if (!(x >= 0.0)) throw std::invalid_argument("bessel_coeffs: x must be >= 0");
  const int order = static_cast<int>(std::ceil(x + 12.0 * std::cbrt(std::max(x, 1.0)) + 25.0));
  if (order > max_order)
    throw StepTooLarge("chebyshev step needs order " + std::to_string(order) +
                       " > cap " + std::to_string(max_order) + "; split the time step");
  const int start = order + 40 + static_cast<int>(2.0 * std::sqrt(static_cast<double>(order)));
  std::vector<double> j(static_cast<std::size_t>(start) + 1, 0.0);
  double jp = 0.0, jc = 1e-300;
  j[static_cast<std::size_t>(start)] = jc;
  for (int k = start; k > 0; --k) {
    double jm = (x > 0.0) ? (2.0 * k / x) * jc - jp : -jp;
    if (x == 0.0 && k == 1) jm = 1.0;  // J_0(0) = 1, all higher orders vanish
    jp = jc;
    jc = jm;
    if (std::abs(jc) > 1e250) {
      jp *= 1e-250;
      jc *= 1e-250;
      for (double& v : j) v *= 1e-250;
    }
    j[static_cast<std::size_t>(k) - 1] = jc;
  }
  double s = j[0];
  for (std::size_t k = 2; k < j.size(); k += 2) s += 2.0 * j[k];
  for (double& v : j) v /= s;
  j.resize(static_cast<std::size_t>(order) + 1);
  if (std::abs(j.back()) > 1e-14)
    throw ContractError("bessel_coeffs: coefficient tail above 1e-14");
  return j;
}

}  // namespace detail

// Immutable after construction; safe to share across threads.
struct Propagator {
  PropagatorMethod method = PropagatorMethod::Chebyshev;
  OperatorMatrix op;
  std::shared_ptr<const EigenSystem> basis;  // EigenBasis only
  double radius = 0.0;                       // Chebyshev only
  int max_order = 0;                         // Chebyshev only
};

inline Propagator eigen_propagator(const OperatorMatrix& op, std::size_t dense_site_limit = 2000) {
  Propagator p;
  p.method = PropagatorMethod::EigenBasis;
  p.op = op;
  p.basis = std::make_shared<EigenSystem>(eigensolve(op, dense_site_limit));
  return p;
}

inline Propagator chebyshev_propagator(const OperatorMatrix& op, int max_order = 20000) {
  if (max_order < 1) throw std::invalid_argument("chebyshev_propagator: max_order must be >= 1");
  Propagator p;
  p.method = PropagatorMethod::Chebyshev;
  p.op = op;
  p.radius = op.spectral_radius_bound();
  p.max_order = max_order;
  return p;
}

namespace detail {

inline SpinorState evolve_eigenbasis(const Propagator& prop, const SpinorState& psi, double t) {
  const EigenSystem& sys = *prop.basis;
  const Eigen::Index n = sys.values.size();
  Eigen::VectorXd re(n), im(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    re(i) = psi.amp[static_cast<std::size_t>(i)].real();
    im(i) = psi.amp[static_cast<std::size_t>(i)].imag();
  }
  const Eigen::VectorXd yre = sys.vectors.transpose() * re;
  const Eigen::VectorXd yim = sys.vectors.transpose() * im;
  Eigen::VectorXd wre(n), wim(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ph = -sys.values(i) * t;
    const double cph = std::cos(ph), sph = std::sin(ph);
    wre(i) = cph * yre(i) - sph * yim(i);
    wim(i) = sph * yre(i) + cph * yim(i);
  }
  const Eigen::VectorXd ore = sys.vectors * wre;
  const Eigen::VectorXd oim = sys.vectors * wim;
  SpinorState out(psi.window);
  for (Eigen::Index i = 0; i < n; ++i)
    out.amp[static_cast<std::size_t>(i)] = cdouble(ore(i), oim(i));
  return out;
}

inline SpinorState evolve_chebyshev(const Propagator& prop, const SpinorState& psi, double t) {
  const double x = prop.radius * t;
  const std::vector<double> bes = bessel_coeffs(x, prop.max_order);
  // drop the superexponentially small trailing coefficients
  std::size_t last = bes.size();
  while (last > 1 && std::abs(bes[last - 1]) < 1e-18) --last;

  const std::size_t n = prop.op.dim();
  const double inv_r = prop.radius > 0.0 ? 1.0 / prop.radius : 0.0;
  std::vector<cdouble> vm(psi.amp), vc(n), vn(n), out(n);
  // k = 0 term
  for (std::size_t i = 0; i < n; ++i) out[i] = bes[0] * vm[i];
  if (last > 1) {
    prop.op.apply(vm.data(), vc.data());
    for (std::size_t i = 0; i < n; ++i) vc[i] *= inv_r;
    static constexpr double phase_re[4] = {1.0, 0.0, -1.0, 0.0};
    static constexpr double phase_im[4] = {0.0, -1.0, 0.0, 1.0};
    for (std::size_t k = 1; k < last; ++k) {
      const cdouble coeff = 2.0 * bes[k] * cdouble(phase_re[k % 4], phase_im[k % 4]);
      for (std::size_t i = 0; i < n; ++i) out[i] += coeff * vc[i];
      if (k + 1 == last) break;
      prop.op.apply(vc.data(), vn.data());
      for (std::size_t i = 0; i < n; ++i) {
        const cdouble next = 2.0 * inv_r * vn[i] - vm[i];
        vm[i] = vc[i];
        vc[i] = next;
      }
    }
  }
  SpinorState res(psi.window);
  res.amp = std::move(out);
  return res;
}

}  // namespace detail

inline SpinorState evolve(const Propagator& prop, const SpinorState& psi, double t) {
  if (!(psi.window == prop.op.window))
    throw std::invalid_argument("evolve: state window does not match the operator");
  if (t == 0.0) return psi;
  if (t < 0.0) {
    SpinorState conj_in(psi.window);
    for (std::size_t i = 0; i < psi.amp.size(); ++i) conj_in.amp[i] = std::conj(psi.amp[i]);
    SpinorState fwd = evolve(prop, conj_in, -t);
    for (cdouble& a : fwd.amp) a = std::conj(a);
    return fwd;
  }
  SpinorState out = prop.method == PropagatorMethod::EigenBasis
                        ? detail::evolve_eigenbasis(prop, psi, t)
                        : detail::evolve_chebyshev(prop, psi, t);
  const double nin = psi.norm(), nout = out.norm();
  if (std::abs(nout - nin) > 1e-10 * std::max(1.0, nin))
    throw ContractError("evolve: unitarity breach beyond 1e-10");
  return out;
}

// Splits t into equal segments small enough for the configured Chebyshev cap.
inline SpinorState evolve_split(const Propagator& prop, const SpinorState& psi, double t) {
  if (prop.method == PropagatorMethod::EigenBasis || t == 0.0) return evolve(prop, psi, t);
  const double span = prop.radius * std::abs(t);
  // invert order ~ x + 12 cbrt(x) + 25 conservatively
  const double cap = static_cast<double>(prop.max_order);
  const double x_cap = std::max(1.0, cap - 12.0 * std::cbrt(cap) - 27.0);
  const int segments = std::max(1, static_cast<int>(std::ceil(span / x_cap)));
  SpinorState cur = psi;
  for (int s = 0; s < segments; ++s) cur = evolve(prop, cur, t / segments);
  return cur;
}

}  // namespace dirac1d

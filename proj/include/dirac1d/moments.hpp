#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dirac1d/propagator.hpp"

namespace dirac1d {

struct MomentSeries {
  double q = 0.0;
  std::vector<double> times;
  std::vector<double> values;
  bool boundary_contaminated = false;
  bool empty_projection = false;
};

// Position moment sum_n |n|^q (|psi+|^2 + |psi-|^2), with |0|^q = 0 for q > 0.
inline double moment(const SpinorState& psi, double q) {
  const std::vector<double> w = position_weights(q, psi.window);
  double acc = 0.0;
  for (long n = psi.window.n_min; n <= psi.window.n_max; ++n)
    acc += w[psi.window.index(n)] * psi.site_mass(n);
  return acc;
}

// Mass within `band` sites of either window edge, relative to the total.
inline double boundary_mass_fraction(const SpinorState& psi, long band = 10) {
  const double total = psi.squared_norm();
  if (total == 0.0) return 0.0;
  double edge = 0.0;
  const long lo_end = std::min(psi.window.n_max, psi.window.n_min + band - 1);
  const long hi_start = std::max(psi.window.n_min, psi.window.n_max - band + 1);
  for (long n = psi.window.n_min; n <= lo_end; ++n) edge += psi.site_mass(n);
  for (long n = std::max(hi_start, lo_end + 1); n <= psi.window.n_max; ++n)
    edge += psi.site_mass(n);
  return edge / total;
}

namespace detail {

inline void check_times(const std::vector<double>& times) {
  if (times.empty()) throw std::invalid_argument("moment_series: empty time grid");
  if (times.front() < 0.0) throw std::invalid_argument("moment_series: negative time");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("moment_series: times must increase");
}

inline MomentSeries evolve_series(const Propagator& prop, SpinorState psi, double q,
                                  const std::vector<double>& times) {
  check_times(times);
  MomentSeries s;
  s.q = q;
  s.times = times;
  s.values.reserve(times.size());
  double t_cur = 0.0;
  for (double t : times) {
    psi = evolve_split(prop, psi, t - t_cur);
    t_cur = t;
    s.values.push_back(moment(psi, q));
    if (boundary_mass_fraction(psi) >= 1e-8) s.boundary_contaminated = true;
  }
  return s;
}

}  // namespace detail

inline MomentSeries moment_series(const Propagator& prop, const SpinorState& psi, double q,
                                  const std::vector<double>& times) {
  if (!(q > 0.0)) throw std::invalid_argument("moment_series: q must be > 0");
  return detail::evolve_series(prop, psi, q, times);
}

// Projects psi onto the eigenvectors with eigenvalue in [e_lo, e_hi], then
// runs the moment series of the projected state.
inline MomentSeries interval_moment_series(const Propagator& prop, const SpinorState& psi,
                                           double q, const std::vector<double>& times,
                                           double e_lo, double e_hi) {
  if (prop.method != PropagatorMethod::EigenBasis)
    throw std::invalid_argument("interval_moment_series: EigenBasis propagator required");
  if (!(q > 0.0)) throw std::invalid_argument("interval_moment_series: q must be > 0");
  if (!(e_lo <= e_hi)) throw std::invalid_argument("interval_moment_series: empty interval");
  const EigenSystem& sys = *prop.basis;
  const Eigen::Index n = sys.values.size();
  Eigen::VectorXd re(n), im(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    re(i) = psi.amp[static_cast<std::size_t>(i)].real();
    im(i) = psi.amp[static_cast<std::size_t>(i)].imag();
  }
  Eigen::VectorXd cre = sys.vectors.transpose() * re;
  Eigen::VectorXd cim = sys.vectors.transpose() * im;
  for (Eigen::Index j = 0; j < n; ++j)
    if (sys.values(j) < e_lo || sys.values(j) > e_hi) {
      cre(j) = 0.0;
      cim(j) = 0.0;
    }
  const Eigen::VectorXd pre = sys.vectors * cre;
  const Eigen::VectorXd pim = sys.vectors * cim;
  SpinorState proj(psi.window);
  for (Eigen::Index i = 0; i < n; ++i)
    proj.amp[static_cast<std::size_t>(i)] = cdouble(pre(i), pim(i));
  if (proj.norm() < 1e-12) {
    detail::check_times(times);
    MomentSeries s;
    s.q = q;
    s.times = times;
    s.values.assign(times.size(), 0.0);
    s.empty_projection = true;
    return s;
  }
  return detail::evolve_series(prop, proj, q, times);
}

// Least-squares slope of ln(value) against ln(t) over t in [t_lo, t_hi].
inline double growth_exponent(const std::vector<double>& times, const std::vector<double>& values,
                              double t_lo, double t_hi) {
  if (times.size() != values.size())
    throw std::invalid_argument("growth_exponent: length mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_lo || times[i] > t_hi) continue;
    if (!(times[i] > 0.0) || !(values[i] > 0.0))
      throw std::invalid_argument("growth_exponent: nonpositive sample in fit window");
    lx.push_back(std::log(times[i]));
    ly.push_back(std::log(values[i]));
  }
  if (lx.size() < 8) throw std::invalid_argument("growth_exponent: needs >= 8 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(lx.size());
  my /= static_cast<double>(lx.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  if (!(den > 0.0)) throw std::invalid_argument("growth_exponent: degenerate time grid");
  return num / den;
}

inline double growth_exponent(const MomentSeries& s, double t_lo, double t_hi) {
  return growth_exponent(s.times, s.values, t_lo, t_hi);
}

}  // namespace dirac1d

#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "dirac1d/compare.hpp"
#include "dirac1d/eigen.hpp"
#include "dirac1d/exact.hpp"
#include "dirac1d/greens.hpp"
#include "dirac1d/io.hpp"
#include "dirac1d/laplace.hpp"
#include "dirac1d/moments.hpp"
#include "dirac1d/nonrel.hpp"
#include "dirac1d/reconstruct.hpp"
#include "dirac1d/sweep.hpp"
#include "dirac1d/transfer.hpp"
#include "dirac1d/wegner.hpp"

namespace dirac1d {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// half-width satisfying the ballistic-cone rule for evolutions up to t_max
inline long safe_half_width(double radius, double t_max) {
  return static_cast<long>(std::ceil(1.2 * radius * t_max)) + 20;
}

}  // namespace detail

// 1. Unit determinant over random parameter draws; identity step at E = V
//    for the massless operator.
inline CriterionResult criterion_unit_determinant() {
  detail::Stopwatch clock;
  const std::uint64_t head = rng::stream_head(101, 0);
  double worst = 0.0;
  for (long i = 0; i < 10000; ++i) {
    const double e = -4.0 + 8.0 * rng::uniform01(rng::site_hash(head, 4 * i));
    const double v = -2.0 + 4.0 * rng::uniform01(rng::site_hash(head, 4 * i + 1));
    const double m = 2.0 * rng::uniform01(rng::site_hash(head, 4 * i + 2));
    const double c = 0.5 + 3.5 * rng::uniform01(rng::site_hash(head, 4 * i + 3));
    worst = std::max(worst, std::abs(single_step(e, v, DiracParams(m, c)).det() - 1.0));
  }
  const RMat2 id_step = single_step(0.7, 0.7, DiracParams(0.0, 1.0));
  const bool exact_id =
      id_step.a == 1.0 && id_step.b == 0.0 && id_step.c == 0.0 && id_step.d == 1.0;
  CriterionResult r{1, "transfer determinant and identity step", false, 0.0, ""};
  r.seconds = clock.seconds();
  r.pass = worst < 1e-12 && exact_id && r.seconds < 1.0;
  r.detail = "max |det-1| = " + detail::fmt(worst) + ", identity step exact = " +
             (exact_id ? "yes" : "no");
  return r;
}

// 2. Lyapunov exponent vanishes at E = V and is positive at E = 0 for the
//    massless Bernoulli model.
inline CriterionResult criterion_lyapunov_signatures() {
  detail::Stopwatch clock;
  const DiracParams par(0.0, 1.0);
  const PotentialSpec spec = PotentialSpec::bernoulli(0.5);
  const auto at_v = lyapunov(0.5, par, spec, 1'000'000, 16, 0);
  const auto at_zero = lyapunov(0.0, par, spec, 1'000'000, 16, 0);
  CriterionResult r{2, "lyapunov signatures on and off the critical energy", false, 0.0, ""};
  r.seconds = clock.seconds();
  const bool zero_at_v = std::abs(at_v.gamma) < std::max(0.01, 3.0 * at_v.stderr_);
  const bool positive_at_zero = at_zero.gamma > 3.0 * at_zero.stderr_;
  r.pass = zero_at_v && positive_at_zero && r.seconds < 60.0;
  r.detail = "gamma(E=V) = " + detail::fmt(at_v.gamma) + " +- " + detail::fmt(at_v.stderr_) +
             ", gamma(E=0) = " + detail::fmt(at_zero.gamma) + " +- " +
             detail::fmt(at_zero.stderr_);
  return r;
}

// 3. Vanishing exponent at every exceptional pair.
//
// These energies are algebraic points where the exponent vanishes through an
// exact cancellation; rounding E to a double already produces a genuinely
// positive rate (~0.02-0.09), so the estimate runs in exact ring arithmetic
// with E -+ V represented by integer coordinates over {1, sqrt2, sqrt3,
// sqrt6}. The double-precision classifier must still recognize the points.
inline CriterionResult criterion_critical_pairs() {
  detail::Stopwatch clock;
  struct Point {
    double e, v, m;
    exactring::Quad x_plus, x_minus;  // E - V and E + V
  };
  using exactring::quad;
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0);
  const std::vector<Point> pts = {
      {s2 + 1 / s2, 1 / s2, 0.0, quad(0, 1), quad(0, 2)},
      {s2 - 1 / s2, 1 / s2, 0.0, quad(0), quad(0, 1)},
      {s3 + 1 / s2, 1 / s2, 1.0, quad(0, 0, 1), quad(0, 1, 1)},
      {s3 - 1 / s2, 1 / s2, 1.0, quad(0, -1, 1), quad(0, 0, 1)},
      {0.0, s2, 0.0, quad(0, -1), quad(0, 1)},
  };
  bool all = true;
  std::string worst;
  double worst_ratio = 0.0;
  for (const Point& p : pts) {
    const auto cls = predict_localization(p.e, p.v, DiracParams(p.m, 1.0));
    if (cls.verdict != LocalizationPrediction::Verdict::ZeroLyapunov) {
      all = false;
      worst = "classifier missed E=" + detail::fmt(p.e) + " V=" + detail::fmt(p.v);
      continue;
    }
    const auto est =
        exactring::exact_lyapunov(p.x_plus, p.x_minus, static_cast<long>(p.m), 0.5, 200'000, 6, 0);
    const double bound = std::max(0.01, 3.0 * est.stderr_);
    if (std::abs(est.gamma) / bound > worst_ratio) {
      worst_ratio = std::abs(est.gamma) / bound;
      worst = "E=" + detail::fmt(p.e) + " V=" + detail::fmt(p.v) + " m=" + detail::fmt(p.m) +
              ": gamma = " + detail::fmt(est.gamma) + " +- " + detail::fmt(est.stderr_);
    }
    all = all && std::abs(est.gamma) < bound;
  }
  CriterionResult r{3, "critical pairs have vanishing exponent", false, 0.0, ""};
  r.seconds = clock.seconds();
  r.pass = all && r.seconds < 120.0;
  r.detail = std::to_string(pts.size()) + " pairs (exact ring products, 2e5 steps x 6), largest "
             "|gamma|/bound = " + detail::fmt(worst_ratio) + " at " + worst;
  return r;
}

// 4. The analytic classifier agrees with the numeric exponent on random
//    (E, V) draws for both masses.
inline CriterionResult criterion_classifier_agreement() {
  detail::Stopwatch clock;
  const std::uint64_t head = rng::stream_head(2026, 0);
  int checked = 0, disagreements = 0;
  std::string first_bad;
  for (int i = 0; i < 200; ++i) {
    const double e = -4.0 + 8.0 * rng::uniform01(rng::site_hash(head, 2 * i));
    const double v = 0.25 + 1.75 * rng::uniform01(rng::site_hash(head, 2 * i + 1));
    const double m = (i % 2 == 0) ? 0.0 : 1.0;
    const DiracParams par(m, 1.0);
    const auto pred = predict_localization(e, v, par);
    auto est = lyapunov(e, par, PotentialSpec::bernoulli(v), 1'000'000, 8,
                        1000 + static_cast<std::uint64_t>(i));
    bool ok;
    if (pred.verdict == LocalizationPrediction::Verdict::PositiveLyapunov) {
      ok = est.gamma > 3.0 * est.stderr_;
      if (!ok) {  // slow growth near a critical curve: spend more steps
        est = lyapunov(e, par, PotentialSpec::bernoulli(v), 8'000'000, 8,
                       1000 + static_cast<std::uint64_t>(i));
        ok = est.gamma > 3.0 * est.stderr_;
      }
    } else {
      ok = std::abs(est.gamma) < 0.01;
    }
    ++checked;
    if (!ok) {
      ++disagreements;
      if (first_bad.empty())
        first_bad = " first at E=" + detail::fmt(e) + " V=" + detail::fmt(v) +
                    " m=" + detail::fmt(m) + " gamma=" + detail::fmt(est.gamma) + "+-" +
                    detail::fmt(est.stderr_);
    }
  }
  CriterionResult r{4, "classifier agrees with the numeric exponent", false, 0.0, ""};
  r.seconds = clock.seconds();
  r.pass = disagreements == 0 && r.seconds < 600.0;
  r.detail = std::to_string(checked) + " points, " + std::to_string(disagreements) +
             " disagreements" + first_bad;
  return r;
}

// 5. Time route and energy route of the Laplace-averaged moment agree on the
//    same finite box.
inline CriterionResult criterion_cross_route_identity() {
  detail::Stopwatch clock;
  const LatticeWindow box(-32, 31);
  const auto omega = sample_realization(PotentialSpec::bernoulli(0.5), box, 0, 0);
  const auto op = build_dirac(DiracParams(0.0, 1.0), omega);
  const double a_time =
      laplace_moment_time(chebyshev_propagator(op), SpinorState::delta_plus(box, 0), 2.0, 4.0)
          .value;
  const double a_energy = laplace_moment_energy(op, 2.0, 4.0, default_energy_grid(op, 4.0)).value;
  const double rel = std::abs(a_time - a_energy) / a_energy;
  CriterionResult r{5, "laplace moment agrees across both routes", false, 0.0, ""};
  r.seconds = clock.seconds();
  r.pass = rel < 0.02 && r.seconds < 30.0;
  r.detail = "A_time = " + detail::fmt(a_time) + ", A_energy = " + detail::fmt(a_energy) +
             ", rel diff = " + detail::fmt(rel);
  return r;
}

namespace detail {

// Laplace-averaged moment A^(2)(T) through the resolvent route, on a box
// large enough that saturation is negligible at horizon T.
inline double transport_a_energy(double mass, double t_horizon, std::uint64_t seed) {
  const DiracParams par(mass, 1.0);
  const double radius = par.free_spectral_radius() + 0.5;
  const long half = static_cast<long>(std::ceil(9.0 * radius * t_horizon));
  const LatticeWindow w(-half, half);
  const auto omega = sample_realization(PotentialSpec::bernoulli(0.5), w, seed, 0);
  const auto op = build_dirac(par, omega);
  return laplace_moment_energy(op, 2.0, t_horizon, default_energy_grid(op, t_horizon)).value;
}

inline MomentSeries transport_m_series(double mass, double v_amp,
                                       const std::vector<double>& times, std::uint64_t seed) {
  const DiracParams par(mass, 1.0);
  const double radius = par.free_spectral_radius() + v_amp;
  const LatticeWindow w(-safe_half_width(radius, times.back()), safe_half_width(radius, times.back()));
  const auto omega = v_amp > 0.0
                         ? sample_realization(PotentialSpec::bernoulli(v_amp), w, seed, 0)
                         : sample_realization(PotentialSpec::constant(0.0), w, seed, 0);
  const Propagator prop = chebyshev_propagator(build_dirac(par, omega));
  return moment_series(prop, SpinorState::delta_plus(w, 0), 2.0, times);
}

inline std::vector<double> transport_t_grid() {
  return {10.0, 14.0, 20.0, 28.0, 40.0, 57.0, 80.0, 113.0, 160.0, 200.0};
}

inline std::vector<double> saturation_time_grid() {
  std::vector<double> t{10.0, 13.0, 17.0, 22.0, 29.0, 38.0};
  for (double x = 50.0; x <= 200.0; x += 10.0) t.push_back(x);
  return t;
}

// Disorder-averaged moment series. A single massive realization oscillates
// (revival beats between a handful of localized modes, swings up to ~50%);
// the bounded-transport statement is about the ensemble mean, which is what
// saturates cleanly.
inline MomentSeries transport_m_series_mean(double mass, double v_amp,
                                            const std::vector<double>& times, std::uint64_t seed,
                                            int n_real) {
  const DiracParams par(mass, 1.0);
  const double radius = par.free_spectral_radius() + v_amp;
  const long half = safe_half_width(radius, times.back());
  const LatticeWindow w(-half, half);
  MomentSeries acc;
  for (int r = 0; r < n_real; ++r) {
    const auto omega = sample_realization(PotentialSpec::bernoulli(v_amp), w, seed,
                                          static_cast<std::uint64_t>(r));
    const Propagator prop = chebyshev_propagator(build_dirac(par, omega));
    const MomentSeries one = moment_series(prop, SpinorState::delta_plus(w, 0), 2.0, times);
    if (r == 0) {
      acc = one;
    } else {
      for (std::size_t i = 0; i < acc.values.size(); ++i) acc.values[i] += one.values[i];
      acc.boundary_contaminated = acc.boundary_contaminated || one.boundary_contaminated;
    }
  }
  for (double& v : acc.values) v /= static_cast<double>(n_real);
  return acc;
}

inline const MomentSeries& massive_saturation_series() {  // shared by criteria 6 and 7
  static const MomentSeries s = transport_m_series_mean(1.0, 0.5, saturation_time_grid(), 0, 16);
  return s;
}

}  // namespace detail

// 6. Transport contrast: growing A^(2)(T) for the massless model at the
//    critical potential, bounded moments for the massive one.
inline CriterionResult criterion_transport_contrast() {
  detail::Stopwatch clock;
  const std::vector<double> ts = detail::transport_t_grid();
  std::vector<double> as;
  for (double t : ts) as.push_back(detail::transport_a_energy(0.0, t, 0));
  const double exponent = growth_exponent(ts, as, 10.0, 200.0);

  const MomentSeries& massive = detail::massive_saturation_series();
  double peak = 0.0, at_end = 0.0;
  for (std::size_t i = 0; i < massive.times.size(); ++i) {
    if (massive.times[i] >= 50.0) peak = std::max(peak, massive.values[i]);
    if (massive.times[i] == 200.0) at_end = massive.values[i];
  }
  const double sat = std::abs(peak - at_end) / at_end;

  CriterionResult r{6, "transport contrast between the two masses", false, 0.0, ""};
  r.seconds = clock.seconds();
  r.pass = exponent >= 0.8 && sat <= 0.10 && !massive.boundary_contaminated && r.seconds < 300.0;
  r.detail = "A(T) exponent (m=0) = " + detail::fmt(exponent) +
             ", massive saturation spread (mean of 16) = " + detail::fmt(sat);
  return r;
}

// 7. Ballistic ceiling on the fitted moment exponent; the free case is
//    exactly ballistic.
inline CriterionResult criterion_ballistic_ceiling() {
  detail::Stopwatch clock;
  const std::vector<double> long_times{10.0, 13.0, 17.0,  22.0,  29.0,  38.0, 50.0,
                                       65.0, 85.0, 110.0, 140.0, 170.0, 200.0};
  const MomentSeries critical = detail::transport_m_series(0.0, 0.5, long_times, 0);
  const double exp_critical = growth_exponent(critical, 10.0, 200.0);
  const MomentSeries& massive = detail::massive_saturation_series();
  const double exp_massive = growth_exponent(massive, 10.0, 200.0);
  const std::vector<double> free_times{10.0, 12.0, 15.0, 19.0, 24.0, 30.0, 37.0, 46.0, 57.0, 71.0, 88.0, 100.0};
  const MomentSeries free_case = detail::transport_m_series(0.0, 0.0, free_times, 0);
  const double exp_free = growth_exponent(free_case, 10.0, 100.0);

  CriterionResult r{7, "moment growth stays under the ballistic ceiling", false, 0.0, ""};
  r.seconds = clock.seconds();
  r.pass = exp_critical <= 2.05 && exp_massive <= 2.05 && std::abs(exp_free - 2.0) <= 0.1;
  r.detail = "exponents: critical " + detail::fmt(exp_critical) + ", massive " +
             detail::fmt(exp_massive) + ", free " + detail::fmt(exp_free);
  return r;
}

// 8. Nonrelativistic resolvent convergence at rate O(1/c).
inline CriterionResult criterion_nonrel_rate() {
  detail::Stopwatch clock;
  const LatticeWindow w(-30, 29);
  const auto omega = sample_realization(PotentialSpec::bernoulli(1.0), w, 0, 0);
  std::vector<double> errs;
  std::string table;
  for (double c : {8.0, 16.0, 32.0, 64.0}) {
    errs.push_back(nonrel_limit_error(c, 1.0, cdouble(0.0, 1.0), omega));
    table += (table.empty() ? "" : ", ") + std::string("c=") + detail::fmt(c) + ": " +
             detail::fmt(errs.back());
  }
  bool ok = true;
  std::string ratios;
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double ratio = errs[i] / errs[i - 1];
    ok = ok && errs[i] < errs[i - 1] && ratio > 0.4 && ratio < 0.65;
    ratios += (i > 1 ? " " : "") + detail::fmt(ratio);
  }
  CriterionResult r{8, "nonrelativistic limit converges at first order", false, 0.0, ""};
  r.seconds = clock.seconds();
  r.pass = ok && r.seconds < 60.0;
  r.detail = table + "; ratios " + ratios;
  return r;
}

// 9. Moment differences scale linearly in the mass gap and at most like
//    T^(q+2) in the horizon.
inline CriterionResult criterion_mass_scaling() {
  detail::Stopwatch clock;
  const std::vector<double> t_grid{8.0, 11.0, 15.0, 21.0, 29.0, 40.0, 55.0, 76.0};
  const double radius = DiracParams(4e-3, 1.0).free_spectral_radius() + 0.5;
  const long half = detail::safe_half_width(radius, t_grid.back());
  const auto omega =
      sample_realization(PotentialSpec::bernoulli(0.5), LatticeWindow(-half, half), 0, 0);
  // Doubling in the mass is a first-order statement; evaluate it at the
  // largest horizon with m_max*T <= 0.12 so the next-order correction stays
  // well inside the 25% tolerance. The T-exponent fit uses the full grid.
  std::size_t i_lin = 0;
  for (std::size_t i = 0; i < t_grid.size(); ++i)
    if (4e-3 * t_grid[i] <= 0.12) i_lin = i;
  std::vector<double> sup_at_t, exps;
  for (double m : {1e-3, 2e-3, 4e-3}) {
    const MassComparison cmp = mass_comparison(m, 0.0, 1.0, omega, 2.0, t_grid);
    sup_at_t.push_back(cmp.sup_diff[i_lin]);
    exps.push_back(cmp.t_exponent);
  }
  bool ok = true;
  std::string detail_s = "sup at T=" + detail::fmt(t_grid[i_lin]) + ": ";
  for (std::size_t i = 0; i < sup_at_t.size(); ++i)
    detail_s += (i ? ", " : "") + detail::fmt(sup_at_t[i]);
  detail_s += "; doubling ";
  for (std::size_t i = 1; i < sup_at_t.size(); ++i) {
    const double ratio = sup_at_t[i] / sup_at_t[i - 1];
    ok = ok && ratio > 1.5 && ratio < 2.5;
    detail_s += (i > 1 ? " " : "") + detail::fmt(ratio);
  }
  detail_s += "; T-exponents ";
  for (std::size_t i = 0; i < exps.size(); ++i) {
    ok = ok && exps[i] <= 4.2;
    detail_s += (i ? " " : "") + detail::fmt(exps[i]);
  }
  CriterionResult r{9, "mass comparison scaling in gap and horizon", false, 0.0, ""};
  r.seconds = clock.seconds();
  r.pass = ok && r.seconds < 300.0;
  r.detail = detail_s;
  return r;
}

// 10. Rounding-level structural identities: perturbation expansion, Green's
//     one-step recursion, boundary-data reconstruction, boundary split.
inline CriterionResult criterion_structural_identities() {
  detail::Stopwatch clock;
  const DiracParams par(1.0, 1.0);
  const auto omega =
      sample_realization(PotentialSpec::bernoulli(1.0), LatticeWindow(-10, 30), 0, 0);
  const double per =
      perturbation_identity_residual(0.3, cdouble(0.0, 0.1), omega, 0, 20, par);

  const auto omega_g =
      sample_realization(PotentialSpec::bernoulli(1.0), LatticeWindow(-100, 99), 1, 0);
  const double green = greens_transfer_residual(build_dirac(par, omega_g), cdouble(0.0, 2.0));

  const auto omega_r =
      sample_realization(PotentialSpec::bernoulli(1.0), LatticeWindow(-200, 199), 6, 0);
  const auto op_r = build_dirac(par, omega_r);
  const auto sys = eigensolve(op_r);
  double rec = 1e300;
  for (std::size_t j = sys.count() / 3; j < sys.count(); j += 17) {
    const SpinorState phi = sys.state(j);
    const DecayFit fit = decay_fit(phi);
    const long lo = fit.center - 20, hi = fit.center + 19;
    if (lo - 1 < op_r.window.n_min || hi + 1 > op_r.window.n_max) continue;
    try {
      rec = reconstruct_eigenfunction_residual(op_r, sys.values(static_cast<Eigen::Index>(j)),
                                               phi, LatticeWindow(lo, hi));
      break;
    } catch (const std::invalid_argument&) {
      continue;
    }
  }

  const LatticeWindow outer(-20, 19), inner(-5, 5);
  const auto omega_b = sample_realization(PotentialSpec::bernoulli(1.0), outer, 2, 0);
  const auto full = build_dirac(par, omega_b);
  const auto left = restrict_to(full, LatticeWindow(outer.n_min, inner.n_min - 1));
  const auto mid = restrict_to(full, inner);
  const auto right = restrict_to(full, LatticeWindow(inner.n_max + 1, outer.n_max));
  const auto cut = boundary_operator(outer, inner, par.light_speed);
  bool split_exact = true;
  const std::size_t dim = full.dim();
  for (std::size_t i = 0; i < dim && split_exact; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      double direct = 0.0;
      const long si = outer.n_min + static_cast<long>(i / 2);
      const long sj = outer.n_min + static_cast<long>(j / 2);
      auto part_entry = [&](const OperatorMatrix& part) -> double {
        if (!part.window.contains(si) || !part.window.contains(sj)) return 0.0;
        const std::size_t pi = 2 * part.window.index(si) + (i % 2);
        const std::size_t pj = 2 * part.window.index(sj) + (j % 2);
        return part.entry(pi, pj);
      };
      direct += part_entry(left) + part_entry(mid) + part_entry(right);
      double f_sum = 0.0;
      for (const BoundaryBlock& b : cut.blocks)
        if (b.j == si && b.k == sj) f_sum += b.w[i % 2][j % 2];
      if (full.entry(i, j) != direct - f_sum) split_exact = false;
    }

  CriterionResult r{10, "structural identities at rounding level", false, 0.0, ""};
  r.seconds = clock.seconds();
  r.pass = per < 1e-9 && green < 1e-8 && rec < 1e-6 && split_exact;
  r.detail = "perturbation " + detail::fmt(per) + ", green " + detail::fmt(green) +
             ", reconstruction " + detail::fmt(rec) + ", boundary split exact = " +
             (split_exact ? "yes" : "no");
  return r;
}

// 11. Median eigenfunction decay rate tracks the Lyapunov exponent.
inline CriterionResult criterion_decay_matches_lyapunov() {
  detail::Stopwatch clock;
  const DiracParams par(1.0, 1.0);
  const auto omega =
      sample_realization(PotentialSpec::bernoulli(1.0), LatticeWindow(-200, 199), 11, 0);
  const auto sys = eigensolve(build_dirac(par, omega));
  std::vector<double> ratios;
  for (std::size_t j = 0; j < sys.count(); j += 24) {
    const double e = sys.values(static_cast<Eigen::Index>(j));
    if (std::abs(e) < 0.4 || std::abs(e) > 3.0) continue;
    const DecayFit fit = decay_fit(sys.state(j));
    const auto gamma = lyapunov(e, par, PotentialSpec::bernoulli(1.0), 200'000, 8, 3);
    if (gamma.gamma <= 0.0) continue;
    ratios.push_back(fit.rate / gamma.gamma);
  }
  std::sort(ratios.begin(), ratios.end());
  const double median = ratios.empty() ? 0.0 : ratios[ratios.size() / 2];
  CriterionResult r{11, "eigenfunction decay tracks the lyapunov exponent", false, 0.0, ""};
  r.seconds = clock.seconds();
  r.pass = ratios.size() >= 5 && std::abs(median - 1.0) <= 0.3 && r.seconds < 120.0;
  r.detail = std::to_string(ratios.size()) + " eigenvectors, median rate/gamma = " +
             detail::fmt(median);
  return r;
}

// 12. Near-spectrum probability is nonincreasing in the box size; the
//     single-site case matches brute-force enumeration exactly.
inline CriterionResult criterion_wegner_probe() {
  detail::Stopwatch clock;
  const DiracParams par(1.0, 1.0);
  const PotentialSpec spec = PotentialSpec::bernoulli(1.0);
  std::vector<WegnerResult> probes;
  for (long l : {20l, 40l, 80l}) probes.push_back(wegner_probability(0.2, l, 0.5, 0.1, par, spec, 2000, 0));
  bool monotone = true;
  std::string table;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    table += (i ? ", " : "") + std::string("L=") + std::to_string(probes[i].L) + ": " +
             detail::fmt(probes[i].probability) + "+-" + detail::fmt(probes[i].stderr_);
    if (i > 0) {
      const double slack =
          2.0 * std::sqrt(probes[i].stderr_ * probes[i].stderr_ +
                          probes[i - 1].stderr_ * probes[i - 1].stderr_);
      monotone = monotone && probes[i].probability <= probes[i - 1].probability + slack;
    }
  }

  const auto single = wegner_probability(0.2, 0, 0.5, 0.1, par, spec);
  double brute_hits = 0.0;
  for (double v0 : {1.0, -1.0}) {
    const double d = std::min(std::abs(v0 + std::sqrt(2.0) - 0.2),
                              std::abs(v0 - std::sqrt(2.0) - 0.2));
    if (d <= std::exp(-0.1)) brute_hits += 0.5;
  }
  const bool exact_match = single.exact && single.probability == brute_hits;

  CriterionResult r{12, "near-spectrum probability shrinks with the box", false, 0.0, ""};
  r.seconds = clock.seconds();
  r.pass = monotone && exact_match;
  r.detail = table + "; single-site exact " + detail::fmt(single.probability) +
             " vs brute force " + detail::fmt(brute_hits);
  return r;
}

// 13. Sweep outputs are byte-identical across reruns and parallelism degrees.
inline CriterionResult criterion_determinism() {
  detail::Stopwatch clock;
  SweepConfig cfg;
  cfg.energies = {0.1, 0.3, 0.5, 0.7, 0.9};
  cfg.potentials = {0.5};
  cfg.masses = {0.0};
  cfg.steps = 200'000;
  cfg.realizations = 16;
  cfg.master_seed = 7;

  cfg.parallelism = 1;
  const SweepResult serial = run_sweep(cfg, "lyapunov");
  const std::string csv1 = sweep_aggregate_csv(serial, cfg);
  const std::string jsonl1 = sweep_records_jsonl(serial, cfg);
  cfg.parallelism = 8;
  const SweepResult wide = run_sweep(cfg, "lyapunov");
  const std::string csv8 = sweep_aggregate_csv(wide, cfg);
  const std::string jsonl8 = sweep_records_jsonl(wide, cfg);
  cfg.parallelism = 1;
  const SweepResult again = run_sweep(cfg, "lyapunov");
  cfg.parallelism = 8;  // hash must not depend on parallelism either
  const std::string csv_rerun = sweep_aggregate_csv(again, cfg);

  SweepConfig mcfg;
  mcfg.masses = {1.0};
  mcfg.potentials = {0.5};
  mcfg.qs = {2.0};
  mcfg.lengths = {40};
  mcfg.horizons = {5.0};
  mcfg.realizations = 3;
  mcfg.master_seed = 9;
  mcfg.parallelism = 1;
  const std::string mom1 = sweep_records_jsonl(run_sweep(mcfg, "moments"), mcfg);
  mcfg.parallelism = 4;
  const std::string mom4 = sweep_records_jsonl(run_sweep(mcfg, "moments"), mcfg);

  CriterionResult r{13, "sweeps are byte-identical at any parallelism", false, 0.0, ""};
  r.seconds = clock.seconds();
  r.pass = csv1 == csv8 && jsonl1 == jsonl8 && csv1 == csv_rerun && mom1 == mom4;
  r.detail = std::string("lyapunov csv/jsonl equal = ") +
             ((csv1 == csv8 && jsonl1 == jsonl8) ? "yes" : "no") +
             ", rerun equal = " + (csv1 == csv_rerun ? "yes" : "no") +
             ", moments jsonl equal = " + (mom1 == mom4 ? "yes" : "no");
  return r;
}

inline std::vector<CriterionResult> run_all_criteria() {
  return {criterion_unit_determinant(),      criterion_lyapunov_signatures(),
          criterion_critical_pairs(),        criterion_classifier_agreement(),
          criterion_cross_route_identity(),  criterion_transport_contrast(),
          criterion_ballistic_ceiling(),     criterion_nonrel_rate(),
          criterion_mass_scaling(),          criterion_structural_identities(),
          criterion_decay_matches_lyapunov(), criterion_wegner_probe(),
          criterion_determinism()};
}

}  // namespace dirac1d

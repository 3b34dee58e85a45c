#pragma once

// Transfer matrices of the eigenvalue recursion. At energy E and site value v
// the update matrix mapping (psi+_n, psi-_{n-1}) to (psi+_{n+1}, psi-_n) is
//
//   T_v(E) = [ 1 + (m^2 c^4 - (E-v)^2)/c^2    (m c^2 + E - v)/c ]
//            [ (m c^2 - E + v)/c               1                ]
//
// which has determinant 1 for every real v. Products over a potential
// realization, their Lyapunov exponent, the elliptic/parabolic/hyperbolic
// classification, and the exact classifier of where the exponent vanishes.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "params.hpp"

namespace dirac1d {

namespace detail {
inline double abs2(double x) { return x * x; }
inline double abs2(const std::complex<double>& x) { return std::norm(x); }
}  // namespace detail

template <class T>
struct Mat2T {
  T a{}, b{}, c{}, d{};  // [[a, b], [c, d]]

  static Mat2T identity() { return {T(1), T(0), T(0), T(1)}; }

  Mat2T operator*(const Mat2T& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Mat2T operator-(const Mat2T& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
  Mat2T operator+(const Mat2T& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  Mat2T scaled(T s) const { return {a * s, b * s, c * s, d * s}; }

  T det() const { return a * d - b * c; }
  T trace() const { return a + d; }
  // Adjugate; equals the inverse when det = 1.
  Mat2T adjugate() const { return {d, -b, -c, a}; }

  double frobenius_sq() const {
    using detail::abs2;
    return abs2(a) + abs2(b) + abs2(c) + abs2(d);
  }
  double frobenius() const { return std::sqrt(frobenius_sq()); }

  // Spectral norm from the closed-form singular values of a 2x2 matrix.
  double norm2() const {
    using detail::abs2;
    const double f = frobenius_sq();
    const double dd = abs2(det());
    const double disc = std::max(0.0, f * f - 4.0 * dd);
    return std::sqrt(0.5 * (f + std::sqrt(disc)));
  }
};

using Mat2 = Mat2T<std::complex<double>>;
using RMat2 = Mat2T<double>;

inline Mat2 to_complex(const RMat2& m) { return {m.a, m.b, m.c, m.d}; }

template <class Scalar>
inline Mat2T<Scalar> single_step(Scalar E, double site_value, const DiracParams& p) {
  const double c = p.light_speed;
  const double mc2 = p.mc2();
  const Scalar alpha = E - site_value;
  Mat2T<Scalar> t;
  t.a = Scalar(1) + (mc2 * mc2 - alpha * alpha) / (c * c);
  t.b = (mc2 + alpha) / c;
  t.c = (mc2 - alpha) / c;
  t.d = Scalar(1);
  return t;
}

// Product T(E; n, k) = T_{V(n-1)} * ... * T_{V(k)} for k <= n, kept as a
// normalized matrix plus the accumulated log of extracted norms:
// true product = matrix * exp(log_scale).
template <class Scalar>
struct ScaledMat2T {
  Mat2T<Scalar> matrix = Mat2T<Scalar>::identity();
  double log_scale = 0.0;

  double log_norm2() const { return log_scale + std::log(matrix.norm2()); }
};

using ScaledMat2 = ScaledMat2T<std::complex<double>>;
using ScaledRMat2 = ScaledMat2T<double>;

template <class Scalar>
inline ScaledMat2T<Scalar> product(Scalar E, const Realization& omega, long k, long n,
                                   const DiracParams& p) {
  if (k > n) throw std::invalid_argument("product: requires k <= n");
  if (k < n && !(omega.window.contains(k) && omega.window.contains(n - 1)))
    throw std::invalid_argument("product: sites [k, n-1] not inside realization window");
  ScaledMat2T<Scalar> acc;
  long count = 0;
  for (long l = k; l < n; ++l) {
    acc.matrix = single_step(E, omega.at(l), p) * acc.matrix;
    if ((++count & 15) == 0 || acc.matrix.frobenius_sq() > 1e200) {
      const double f = acc.matrix.frobenius();
      acc.matrix = acc.matrix.scaled(Scalar(1.0 / f));
      acc.log_scale += std::log(f);
    }
  }
  return acc;
}

enum class MatrixClass { Elliptic, Parabolic, Hyperbolic };

inline const char* to_string(MatrixClass c) {
  switch (c) {
    case MatrixClass::Elliptic: return "elliptic";
    case MatrixClass::Parabolic: return "parabolic";
    case MatrixClass::Hyperbolic: return "hyperbolic";
  }
  return "?";
}

// |trace| against 2. tol < 0 selects the default band 1e-9 * max(1, |trace|).
// Rejects matrices with a genuinely complex trace (complex energies have no
// such trichotomy).
inline MatrixClass classify(const Mat2& t, double tol = -1.0) {
  const std::complex<double> tr = t.trace();
  const double tau = std::abs(tr.real());
  if (tol < 0.0) tol = 1e-9 * std::max(1.0, tau);
  if (std::abs(tr.imag()) > std::max(tol, 1e-10 * std::max(1.0, std::abs(tr))))
    throw std::invalid_argument("classify: matrix trace is not real");
  if (std::abs(tau - 2.0) <= tol) return MatrixClass::Parabolic;
  return tau < 2.0 ? MatrixClass::Elliptic : MatrixClass::Hyperbolic;
}

inline MatrixClass classify(const RMat2& t, double tol = -1.0) {
  return classify(to_complex(t), tol);
}

struct LyapunovEstimate {
  double gamma = 0.0;
  double stderr_ = 0.0;  // sample stdev across realizations / sqrt(count)
  long steps = 0;
  int realizations = 0;
  std::uint64_t seed = 0;
};

// One realization of (1/n) log || T(E; n+1, 1) ||, streaming the product with
// periodic renormalization so only the log of the norm is accumulated.
inline double lyapunov_single(double E, const DiracParams& par, const PotentialSpec& pot,
                              long n_steps, std::uint64_t master, std::uint64_t realization) {
  if (pot.kind == PotentialKind::Explicit) n_steps = static_cast<long>(pot.values.size());
  if (n_steps < 1) throw std::invalid_argument("lyapunov: need at least one step");

  double pa = 1.0, pb = 0.0, pc = 0.0, pd = 1.0;
  double logsum = 0.0;
  auto mul_step = [&](const RMat2& t) {
    const double na = t.a * pa + t.b * pc;
    const double nb = t.a * pb + t.b * pd;
    const double nc = t.c * pa + t.d * pc;
    const double nd = t.c * pb + t.d * pd;
    pa = na; pb = nb; pc = nc; pd = nd;
  };
  auto renorm = [&]() {
    const double f = std::sqrt(pa * pa + pb * pb + pc * pc + pd * pd);
    const double inv = 1.0 / f;
    pa *= inv; pb *= inv; pc *= inv; pd *= inv;
    logsum += std::log(f);
  };

  if (pot.kind == PotentialKind::Bernoulli) {
    const RMat2 t_plus = single_step(E, pot.amplitude, par);
    const RMat2 t_minus = single_step(E, -pot.amplitude, par);
    const double p = pot.p_plus;
    const std::uint64_t head = rng::stream_head(master, realization);
    for (long l = 1; l <= n_steps; ++l) {
      const bool up = rng::uniform01(rng::site_hash(head, l)) < p;
      mul_step(up ? t_plus : t_minus);
      if ((l & 15) == 0) renorm();
    }
  } else if (pot.kind == PotentialKind::Constant) {
    const RMat2 t = single_step(E, pot.value, par);
    for (long l = 1; l <= n_steps; ++l) {
      mul_step(t);
      if ((l & 15) == 0) renorm();
    }
  } else {
    for (long l = 0; l < n_steps; ++l) {
      mul_step(single_step(E, pot.values[static_cast<std::size_t>(l)], par));
      if ((l & 15) == 15) renorm();
    }
  }
  const RMat2 acc{pa, pb, pc, pd};
  return (logsum + std::log(acc.norm2())) / static_cast<double>(n_steps);
}

inline LyapunovEstimate lyapunov(double E, const DiracParams& par, const PotentialSpec& pot,
                                 long n_steps = 1'000'000, int n_realizations = 16,
                                 std::uint64_t seed = 0) {
  if (pot.kind != PotentialKind::Bernoulli) n_realizations = 1;
  if (n_realizations < 1) throw std::invalid_argument("lyapunov: need at least one realization");
  std::vector<double> g(static_cast<std::size_t>(n_realizations));
  for (int r = 0; r < n_realizations; ++r)
    g[static_cast<std::size_t>(r)] =
        lyapunov_single(E, par, pot, n_steps, seed, static_cast<std::uint64_t>(r));
  LyapunovEstimate est;
  est.steps = pot.kind == PotentialKind::Explicit ? static_cast<long>(pot.values.size()) : n_steps;
  est.realizations = n_realizations;
  est.seed = seed;
  double mean = 0.0;
  for (double x : g) mean += x;
  mean /= static_cast<double>(g.size());
  est.gamma = mean;
  if (g.size() > 1) {
    double ss = 0.0;
    for (double x : g) ss += (x - mean) * (x - mean);
    est.stderr_ = std::sqrt(ss / static_cast<double>(g.size() - 1)) /
                  std::sqrt(static_cast<double>(g.size()));
  }
  return est;
}

// Exact classifier of the Lyapunov exponent of the Bernoulli model.
// gamma vanishes exactly at
//   (a) E = +/-V for m = 0 and V in (0, c], V != c/sqrt(2), and
//   (b) the exceptional pairs V = c/sqrt(2) with
//       E in {+/- c sqrt(2 + m^2 c^2) +/- c/sqrt(2)}, and
//       V = c sqrt(2 + m^2 c^2) with E = 0,
// and is strictly positive at every other (E, V) with V > 0.
struct LocalizationPrediction {
  enum class Verdict { PositiveLyapunov, ZeroLyapunov };
  enum class Reason { None, CriticalEnergy, CriticalPair };
  Verdict verdict = Verdict::PositiveLyapunov;
  Reason reason = Reason::None;
  std::string detail;
};

inline LocalizationPrediction predict_localization(double E, double V, const DiracParams& p) {
  if (!(V > 0.0)) throw std::invalid_argument("predict_localization: V must be > 0");
  auto near = [](double x, double y) { return std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(y)); };
  const double c = p.light_speed;
  const double mc = p.mass * c;
  const double e_star = c * std::sqrt(2.0 + mc * mc);
  const double v_star = c / std::sqrt(2.0);

  LocalizationPrediction out;
  if (near(V, v_star)) {
    for (double s1 : {1.0, -1.0})
      for (double s2 : {1.0, -1.0})
        if (near(E, s1 * e_star + s2 * v_star)) {
          out.verdict = LocalizationPrediction::Verdict::ZeroLyapunov;
          out.reason = LocalizationPrediction::Reason::CriticalPair;
          out.detail = "exceptional pair V = c/sqrt(2), E = +/-c*sqrt(2+m^2c^2) +/- c/sqrt(2)";
          return out;
        }
  }
  if (near(V, e_star) && near(E, 0.0)) {
    out.verdict = LocalizationPrediction::Verdict::ZeroLyapunov;
    out.reason = LocalizationPrediction::Reason::CriticalPair;
    out.detail = "exceptional pair V = c*sqrt(2+m^2c^2), E = 0";
    return out;
  }
  if (p.mass <= 1e-9 && (near(E, V) || near(E, -V)) && V <= c * (1.0 + 1e-9) && !near(V, v_star)) {
    out.verdict = LocalizationPrediction::Verdict::ZeroLyapunov;
    out.reason = LocalizationPrediction::Reason::CriticalEnergy;
    out.detail = "critical energy E = +/-V (massless, V in (0, c])";
    return out;
  }
  out.detail = "Lyapunov exponent strictly positive";
  return out;
}

// Residual of the exact energy-perturbation expansion of transfer products:
//   T(E+z; n, k) = T(E; n, k) - z * sum_{l=k}^{n-1} T(E+z; n, l+1) S_z(E; l) T(E; l, k)
// with
//   S_z(E; l) = (z/c^2) [[1,0],[0,0]] + (1/c) [[2(E - V_l)/c, -1], [1, 0]].
// Returns the Frobenius norm of LHS - RHS.
inline double perturbation_identity_residual(double E, std::complex<double> zeta,
                                             const Realization& omega, long k, long n,
                                             const DiracParams& p) {
  if (k >= n) throw std::invalid_argument("perturbation_identity_residual: requires k < n");
  if (!(omega.window.contains(k) && omega.window.contains(n - 1)))
    throw std::invalid_argument("perturbation_identity_residual: sites not inside window");
  const double c = p.light_speed;
  const std::size_t len = static_cast<std::size_t>(n - k);
  const std::complex<double> Ez = std::complex<double>(E) + zeta;

  // prefix[i] = T(E; k+i, k), suffix[i] = T(E+zeta; n, k+i). The left side is
  // accumulated with the same forward recursion as prefix so the zeta = 0
  // residual cancels exactly instead of at rounding level.
  std::vector<Mat2> prefix(len + 1), suffix(len + 1);
  prefix[0] = Mat2::identity();
  Mat2 lhs = Mat2::identity();
  for (std::size_t i = 0; i < len; ++i) {
    const double v = omega.at(k + static_cast<long>(i));
    prefix[i + 1] = single_step(std::complex<double>(E), v, p) * prefix[i];
    lhs = single_step(Ez, v, p) * lhs;
  }
  suffix[len] = Mat2::identity();
  for (std::size_t i = len; i > 0; --i)
    suffix[i - 1] = suffix[i] * single_step(Ez, omega.at(k + static_cast<long>(i) - 1), p);

  Mat2 sum{};  // zero
  for (std::size_t i = 0; i < len; ++i) {
    const double v = omega.at(k + static_cast<long>(i));
    Mat2 s{};
    s.a = zeta / (c * c) + 2.0 * (E - v) / (c * c);
    s.b = std::complex<double>(-1.0 / c);
    s.c = std::complex<double>(1.0 / c);
    s.d = 0.0;
    sum = sum + suffix[i + 1] * s * prefix[i];
  }
  const Mat2 rhs = prefix[len] - sum.scaled(zeta);
  return (lhs - rhs).frobenius();
}

namespace detail {

// Normalized cumulative products P_i = T(E; i, 0) stored as unit-Frobenius
// matrices Q_i with logs l_i. Since det P = 1, T(E; i, k) = P_i P_k^{-1}
// = exp(l_i + l_k) * Q_i * adj(Q_k), which is overflow safe.
struct CumulativeProducts {
  std::vector<RMat2> q;
  std::vector<double> logf;

  CumulativeProducts(double E, const Realization& omega, long N, const DiracParams& p) {
    q.resize(static_cast<std::size_t>(N) + 1);
    logf.resize(static_cast<std::size_t>(N) + 1);
    RMat2 acc = RMat2::identity();
    double logs = 0.0;
    q[0] = acc;
    logf[0] = 0.0;
    for (long i = 1; i <= N; ++i) {
      acc = single_step(E, omega.at(i - 1), p) * acc;
      const double f = acc.frobenius();
      acc = acc.scaled(1.0 / f);
      logs += std::log(f);
      q[static_cast<std::size_t>(i)] = acc;
      logf[static_cast<std::size_t>(i)] = logs;
    }
  }

  double log_norm(long n, long k) const {
    const RMat2 m = q[static_cast<std::size_t>(n)] * q[static_cast<std::size_t>(k)].adjugate();
    return logf[static_cast<std::size_t>(n)] + logf[static_cast<std::size_t>(k)] + std::log(m.norm2());
  }
};

inline std::vector<double> chebyshev_nodes(double center, double half_width, int count) {
  std::vector<double> e(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j)
    e[static_cast<std::size_t>(j)] =
        center + half_width * std::cos(M_PI * (2.0 * j + 1.0) / (2.0 * count));
  return e;
}

// The window lemmas hold at a massless critical energy E = +/-V with
// V in (0, c], V != c/sqrt(2); reject anything else.
inline void require_critical_regime(const Realization& omega, long N, const DiracParams& p,
                                    double critical_energy) {
  if (p.mass > 1e-9)
    throw std::invalid_argument("critical window: massless operator required");
  auto near = [](double x, double y) {
    return std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(y));
  };
  double V = 0.0;
  for (long n = 0; n < N; ++n) V = std::max(V, std::abs(omega.at(n)));
  const double c = p.light_speed;
  if (!(V > 0.0) || V > c * (1.0 + 1e-9) || near(V, c / std::sqrt(2.0)))
    throw std::invalid_argument("critical window: requires V in (0, c], V != c/sqrt(2)");
  if (!near(std::abs(critical_energy), V))
    throw std::invalid_argument("critical window: energy must be a critical energy E = +/-V");
}

}  // namespace detail

// sup over all pairs 0 <= k <= n <= N and over Chebyshev-spaced energies in
// the shrinking window [E_c - N^(-lambda-1/2), E_c + N^(-lambda-1/2)] of
// ||T(E; n, k)||. At a massless critical energy this stays O(1) in N.
inline double critical_window_supremum(const Realization& omega, long N, double lambda,
                                       const DiracParams& p, double critical_energy,
                                       int n_energies = 33) {
  if (N < 1) throw std::invalid_argument("critical_window_supremum: N must be >= 1");
  if (n_energies < 33) throw std::invalid_argument("critical_window_supremum: need >= 33 energies");
  if (!(omega.window.contains(0) && omega.window.contains(N - 1)))
    throw std::invalid_argument("critical_window_supremum: realization must cover [0, N-1]");
  detail::require_critical_regime(omega, N, p, critical_energy);
  const double w = std::pow(static_cast<double>(N), -lambda - 0.5);
  double best = 0.0;  // log scale; pairs with n == k give log 1 = 0
  for (double E : detail::chebyshev_nodes(critical_energy, w, n_energies)) {
    const detail::CumulativeProducts cp(E, omega, N, p);
    const std::size_t M = cp.q.size();
    const double maxlog = *std::max_element(cp.logf.begin(), cp.logf.end());
    if (maxlog <= 150.0) {
      // Raw cumulative products fit in doubles (pair Frobenius stays below
      // e^300). They have determinant exactly 1, so the 2-norm is monotone in
      // the Frobenius norm and the pair scan reduces to maximizing the plain
      // sum of squares, with no log or sqrt in the hot loop.
      std::vector<double> pa(M), pb(M), pc(M), pd(M);
      for (std::size_t i = 0; i < M; ++i) {
        const double s = std::exp(cp.logf[i]);
        pa[i] = cp.q[i].a * s;
        pb[i] = cp.q[i].b * s;
        pc[i] = cp.q[i].c * s;
        pd[i] = cp.q[i].d * s;
      }
      double fbest = 2.0;  // identity pairs n == k
      for (std::size_t n = 1; n < M; ++n) {
        const double a = pa[n], b = pb[n], c = pc[n], d = pd[n];
        for (std::size_t k = 0; k < n; ++k) {
          const double e0 = a * pd[k] - b * pc[k];
          const double e1 = b * pa[k] - a * pb[k];
          const double e2 = c * pd[k] - d * pc[k];
          const double e3 = d * pa[k] - c * pb[k];
          const double fsq = e0 * e0 + e1 * e1 + e2 * e2 + e3 * e3;
          if (fsq > fbest) fbest = fsq;
        }
      }
      const double disc = std::max(0.0, fbest * fbest - 4.0);
      best = std::max(best, 0.5 * std::log(0.5 * (fbest + std::sqrt(disc))));
    } else {
      // Growing products: norm2 of a product of two unit-Frobenius matrices
      // is at most 1, so logf[n] + logf[k] bounds each candidate from above.
      // Visit rows by decreasing bound logf[n] + max_{k<=n} logf[k]; in this
      // regime the log spread is wide and the cutoffs bite.
      std::vector<double> prefmax(M);
      std::vector<std::size_t> rows(M);
      double pm = -1e300;
      for (std::size_t i = 0; i < M; ++i) {
        pm = std::max(pm, cp.logf[i]);
        prefmax[i] = pm;
        rows[i] = i;
        best = std::max(best, cp.log_norm(static_cast<long>(i), 0));
      }
      std::sort(rows.begin(), rows.end(), [&](std::size_t x, std::size_t y) {
        return cp.logf[x] + prefmax[x] > cp.logf[y] + prefmax[y];
      });
      for (std::size_t n : rows) {
        const double ln = cp.logf[n];
        if (ln + prefmax[n] <= best) break;
        for (std::size_t k = 0; k <= n; ++k) {
          if (ln + cp.logf[k] <= best) continue;
          best = std::max(best, cp.log_norm(static_cast<long>(n), static_cast<long>(k)));
        }
      }
    }
  }
  return std::exp(best);
}

// Same supremum over a fixed energy window [E_c - delta, E_c + delta] but only
// over pairs at fixed separation n - k = distance; grows at most like
// exp(C * delta * distance) near a critical energy.
inline double critical_window_supremum_fixed_distance(const Realization& omega, long N,
                                                      double delta, long distance,
                                                      const DiracParams& p, double critical_energy,
                                                      int n_energies = 33) {
  if (distance < 1 || distance > N)
    throw std::invalid_argument("critical_window_supremum_fixed_distance: bad distance");
  if (n_energies < 33)
    throw std::invalid_argument("critical_window_supremum_fixed_distance: need >= 33 energies");
  if (!(omega.window.contains(0) && omega.window.contains(N - 1)))
    throw std::invalid_argument("critical_window_supremum_fixed_distance: realization must cover [0, N-1]");
  detail::require_critical_regime(omega, N, p, critical_energy);
  double best = -1e300;
  for (double E : detail::chebyshev_nodes(critical_energy, delta, n_energies)) {
    detail::CumulativeProducts cp(E, omega, N, p);
    for (long k = 0; k + distance <= N; ++k) best = std::max(best, cp.log_norm(k + distance, k));
  }
  return std::exp(best);
}

}  // namespace dirac1d

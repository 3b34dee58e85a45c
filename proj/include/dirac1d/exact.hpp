#pragma once

// Transfer-matrix products in exact arithmetic over Z[sqrt2, sqrt3].
//
// Zero-exponent energies are isolated algebraic points. Rounding E to a
// double moves the cocycle off the zero set, and the rounded system's growth
// rate is genuinely positive: empirically ~3/|ln eps| for perturbation size
// eps, i.e. ~0.09 at double precision, independent of step count. Estimating
// gamma at such points therefore requires representing the step offsets
// E -+ V exactly. With integer coordinates in the basis {1, sqrt2, sqrt3,
// sqrt6} every product stays on the zero set, norms grow subexponentially,
// and coordinate sizes stay O(sqrt(n)) bits, so no renormalization is needed
// (or possible: dividing exact integers would lose exactness).

#include <boost/multiprecision/gmp.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "params.hpp"
#include "transfer.hpp"

namespace dirac1d::exactring {

using Int = boost::multiprecision::mpz_int;

// a + b*sqrt2 + c*sqrt3 + d*sqrt6, integer coordinates.
struct Quad {
  Int a, b, c, d;
};

inline Quad quad(long a, long b = 0, long c = 0, long d = 0) {
  return Quad{Int(a), Int(b), Int(c), Int(d)};
}

inline Quad operator+(const Quad& x, const Quad& y) {
  return Quad{x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
}

inline Quad operator-(const Quad& x, const Quad& y) {
  return Quad{x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
}

inline Quad operator*(const Quad& x, const Quad& y) {
  Quad r;
  r.a = x.a * y.a + 2 * (x.b * y.b) + 3 * (x.c * y.c) + 6 * (x.d * y.d);
  r.b = x.a * y.b + x.b * y.a + 3 * (x.c * y.d + x.d * y.c);
  r.c = x.a * y.c + x.c * y.a + 2 * (x.b * y.d + x.d * y.b);
  r.d = x.a * y.d + x.d * y.a + x.b * y.c + x.c * y.b;
  return r;
}

inline bool operator==(const Quad& x, const Quad& y) {
  return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
}

inline bool is_zero(const Quad& q) { return q.a == 0 && q.b == 0 && q.c == 0 && q.d == 0; }

inline long coord_bits(const Quad& q) {
  long bits = 0;
  for (const Int* v : {&q.a, &q.b, &q.c, &q.d}) {
    if (*v != 0) {
      const Int m = abs(*v);
      bits = std::max(bits, static_cast<long>(msb(m)) + 1);
    }
  }
  return bits;
}

namespace detail {

inline double log2_abs(const Int& v) {  // v != 0
  const Int a = abs(v);
  const long bits = static_cast<long>(msb(a)) + 1;
  constexpr long keep = 53;
  if (bits <= keep) return std::log2(a.convert_to<double>());
  const Int top = a >> (bits - keep);
  return std::log2(top.convert_to<double>()) + static_cast<double>(bits - keep);
}

}  // namespace detail

// ln|value|. The four terms can cancel almost completely, so the evaluation
// carries maxbits + 96 fractional bits; anything below that resolution is
// reported as -inf.
inline double log_abs(const Quad& q) {
  constexpr double minus_inf = -std::numeric_limits<double>::infinity();
  if (is_zero(q)) return minus_inf;
  const long p = coord_bits(q) + 96;
  const Int s2 = sqrt(Int(Int(2) << (2 * p)));
  const Int s3 = sqrt(Int(Int(3) << (2 * p)));
  const Int s6 = sqrt(Int(Int(6) << (2 * p)));
  const Int scaled = (q.a << p) + q.b * s2 + q.c * s3 + q.d * s6;
  if (scaled == 0) return minus_inf;
  constexpr double ln2 = 0.6931471805599453;
  return ln2 * (detail::log2_abs(scaled) - static_cast<double>(p));
}

inline double value_of(const Quad& q) {  // small coordinates only
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
  return q.a.convert_to<double>() + q.b.convert_to<double>() * s2 +
         q.c.convert_to<double>() * s3 + q.d.convert_to<double>() * s6;
}

struct QuadMat2 {
  Quad a, b, c, d;  // [[a, b], [c, d]]
};

inline QuadMat2 quad_identity() { return QuadMat2{quad(1), quad(0), quad(0), quad(1)}; }

// Single transfer step at unit light speed for offset x = E - V(site):
// [[1 + m^2 - x^2, m + x], [m - x, 1]].
inline QuadMat2 exact_step(const Quad& x, long m) {
  const Quad x2 = x * x;
  QuadMat2 t;
  t.a = quad(1 + m * m) - x2;
  t.b = quad(m) + x;
  t.c = quad(m) - x;
  t.d = quad(1);
  return t;
}

inline Quad det(const QuadMat2& w) { return w.a * w.d - w.b * w.c; }

inline long coord_bits(const QuadMat2& w) {
  return std::max(std::max(coord_bits(w.a), coord_bits(w.b)),
                  std::max(coord_bits(w.c), coord_bits(w.d)));
}

inline double log_fro_norm(const QuadMat2& w) {
  const std::array<double, 4> logs = {log_abs(w.a), log_abs(w.b), log_abs(w.c), log_abs(w.d)};
  double top = -std::numeric_limits<double>::infinity();
  for (double l : logs) top = std::max(top, l);
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double l : logs)
    if (l > top - 40.0) sum += std::exp(2.0 * (l - top));
  return top + 0.5 * std::log(sum);
}

// One realization of (1/n) log ||T(n+1, 1)||_F with the same Bernoulli site
// stream as lyapunov_single: sign at step l from uniform01(site_hash(head, l)).
// Exact products cannot be renormalized, so a coordinate-size cap guards
// against misuse at non-critical parameters, where growth is exponential.
inline double exact_lyapunov_single(const Quad& x_plus, const Quad& x_minus, long m,
                                    double p_plus, long n_steps, std::uint64_t master,
                                    std::uint64_t realization, long max_coord_bits) {
  const QuadMat2 t_plus = exact_step(x_plus, m);
  const QuadMat2 t_minus = exact_step(x_minus, m);
  QuadMat2 w = quad_identity();
  const std::uint64_t head = rng::stream_head(master, realization);
  for (long l = 1; l <= n_steps; ++l) {
    const QuadMat2& t = rng::uniform01(rng::site_hash(head, l)) < p_plus ? t_plus : t_minus;
    QuadMat2 next;  // t.d == 1 for every exact_step
    next.a = t.a * w.a + t.b * w.c;
    next.b = t.a * w.b + t.b * w.d;
    next.c = t.c * w.a + w.c;
    next.d = t.c * w.b + w.d;
    w = std::move(next);
    if ((l & 1023) == 0 && coord_bits(w) > max_coord_bits)
      throw ContractError(
          "exact_lyapunov: coordinate growth exceeds the subexponential budget; "
          "the supplied (E, V) pair does not have a vanishing exponent");
  }
  return log_fro_norm(w) / static_cast<double>(n_steps);
}

inline LyapunovEstimate exact_lyapunov(const Quad& x_plus, const Quad& x_minus, long m,
                                       double p_plus, long n_steps, int n_realizations,
                                       std::uint64_t seed, long max_coord_bits = 1L << 20) {
  if (n_steps < 1) throw std::invalid_argument("exact_lyapunov: need at least one step");
  if (n_realizations < 1) throw std::invalid_argument("exact_lyapunov: need a realization");
  std::vector<double> g(static_cast<std::size_t>(n_realizations));
  for (int r = 0; r < n_realizations; ++r)
    g[static_cast<std::size_t>(r)] = exact_lyapunov_single(
        x_plus, x_minus, m, p_plus, n_steps, seed, static_cast<std::uint64_t>(r), max_coord_bits);
  LyapunovEstimate est;
  est.steps = n_steps;
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

}  // namespace dirac1d::exactring

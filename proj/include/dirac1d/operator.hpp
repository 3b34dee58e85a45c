#pragma once

// Finite-window matrix form of the Dirac operator and of its
// nonrelativistic-limit Schrodinger operator, plus spinor states.
//
// Sites n in [n_min, n_max] carry a two-component spinor (psi+_n, psi-_n).
// Interleaved index map: idx(n,+) = 2*(n - n_min), idx(n,-) = idx(n,+) + 1.
// With that ordering both operators are symmetric banded: the Dirac matrix is
// tridiagonal, the Schrodinger-limit matrix is pentadiagonal.
//
// Dirac stencil (zero boundary conditions, hops over the edge dropped):
//   (D psi)+_n = (m c^2 + V_n) psi+_n + c (psi-_{n-1} - psi-_n)
//   (D psi)-_n = (-m c^2 + V_n) psi-_n + c (psi+_{n+1} - psi+_n)
// so <delta_n^-, D delta_n^+> = -c and <delta_n^-, D delta_{n+1}^+> = +c.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "params.hpp"

namespace dirac1d {

struct SpinorState {
  LatticeWindow window;
  std::vector<cdouble> amp;  // interleaved, size 2*sites

  SpinorState() = default;
  explicit SpinorState(const LatticeWindow& w) : window(w), amp(2 * static_cast<std::size_t>(w.sites())) {}

  static SpinorState delta_plus(const LatticeWindow& w, long site) {
    SpinorState s(w);
    if (!w.contains(site)) throw std::invalid_argument("delta_plus: site outside window");
    s.amp[2 * w.index(site)] = 1.0;
    return s;
  }

  std::size_t dim() const { return amp.size(); }
  cdouble& plus(long n) { return amp[2 * window.index(n)]; }
  cdouble& minus(long n) { return amp[2 * window.index(n) + 1]; }
  cdouble plus(long n) const { return amp[2 * window.index(n)]; }
  cdouble minus(long n) const { return amp[2 * window.index(n) + 1]; }

  // |psi+_n|^2 + |psi-_n|^2
  double site_mass(long n) const {
    const std::size_t i = 2 * window.index(n);
    return std::norm(amp[i]) + std::norm(amp[i + 1]);
  }
  double squared_norm() const {
    double s = 0.0;
    for (const cdouble& a : amp) s += std::norm(a);
    return s;
  }
  double norm() const { return std::sqrt(squared_norm()); }
};

enum class OperatorKind { Dirac, SchrodingerLimit };

// Symmetric banded matrix in the interleaved ordering. bands[k][i] holds the
// entry A(i, i+k); k runs over 0..bandwidth.
class OperatorMatrix {
 public:
  OperatorKind kind = OperatorKind::Dirac;
  DiracParams params;
  LatticeWindow window;
  std::vector<double> site_values;  // potential per site
  int bandwidth = 1;
  std::array<std::vector<double>, 3> bands;

  std::size_t dim() const { return 2 * static_cast<std::size_t>(window.sites()); }

  double entry(std::size_t i, std::size_t j) const {
    const std::size_t lo = std::min(i, j), hi = std::max(i, j);
    const std::size_t k = hi - lo;
    if (k > static_cast<std::size_t>(bandwidth)) return 0.0;
    return bands[k][lo];
  }

  template <class Scalar>
  void apply(const Scalar* x, Scalar* y) const {
    const std::size_t n = dim();
    for (std::size_t i = 0; i < n; ++i) y[i] = bands[0][i] * x[i];
    for (int k = 1; k <= bandwidth; ++k) {
      const std::vector<double>& b = bands[k];
      for (std::size_t i = 0; i + k < n; ++i) {
        y[i] += b[i] * x[i + k];
        y[i + k] += b[i] * x[i];
      }
    }
  }

  SpinorState apply(const SpinorState& psi) const {
    if (!(psi.window == window)) throw std::invalid_argument("apply: state window mismatch");
    SpinorState out(window);
    apply(psi.amp.data(), out.amp.data());
    return out;
  }

  double sup_potential() const {
    double m = 0.0;
    for (double v : site_values) m = std::max(m, std::abs(v));
    return m;
  }

  // Rigorous bound R with spectrum contained in [-R, R]. For the Dirac kind
  // the free edge plus the potential sup; otherwise a Gershgorin bound.
  double spectral_radius_bound() const {
    if (kind == OperatorKind::Dirac) return params.free_spectral_radius() + sup_potential();
    double r = 0.0;
    const std::size_t n = dim();
    for (std::size_t i = 0; i < n; ++i) {
      double row = std::abs(bands[0][i]);
      for (int k = 1; k <= bandwidth; ++k) {
        if (i + k < n) row += std::abs(bands[k][i]);
        if (i >= static_cast<std::size_t>(k)) row += std::abs(bands[k][i - k]);
      }
      r = std::max(r, row);
    }
    return r;
  }
};

inline OperatorMatrix build_dirac(const DiracParams& params, const Realization& realization) {
  OperatorMatrix op;
  op.kind = OperatorKind::Dirac;
  op.params = params;
  op.window = realization.window;
  op.site_values = realization.values;
  op.bandwidth = 1;
  const std::size_t N = static_cast<std::size_t>(op.window.sites());
  const double mc2 = params.mc2();
  const double c = params.light_speed;
  op.bands[0].assign(2 * N, 0.0);
  op.bands[1].assign(2 * N - 1, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    const double v = realization.values[i];
    op.bands[0][2 * i] = mc2 + v;
    op.bands[0][2 * i + 1] = -mc2 + v;
    op.bands[1][2 * i] = -c;                       // (n,+) ~ (n,-)
    if (i + 1 < N) op.bands[1][2 * i + 1] = c;     // (n,-) ~ (n+1,+)
  }
  return op;
}

// Nonrelativistic-limit operator H = B^2/(2m) + V*Lambda on the same window,
// where B is the zero-BC truncated hopping block and Lambda projects on the
// upper component. Built from the truncated B, so the diagonal of the upper
// block is 2/(2m)+V_n except 1/(2m)+V_n at n_min, and the lower block is the
// free kinetic term with the mirrored corner at n_max. Off-diagonals couple
// like sites two interleaved slots apart with weight -1/(2m).
inline OperatorMatrix build_schrodinger_limit(double mass, const Realization& realization) {
  if (!(mass > 0.0)) throw std::invalid_argument("build_schrodinger_limit: mass must be > 0");
  OperatorMatrix op;
  op.kind = OperatorKind::SchrodingerLimit;
  op.params = DiracParams(mass, 1.0);  // light speed is not a parameter of the limit
  op.window = realization.window;
  op.site_values = realization.values;
  op.bandwidth = 2;
  const std::size_t N = static_cast<std::size_t>(op.window.sites());
  const double k = 1.0 / (2.0 * mass);
  op.bands[0].assign(2 * N, 0.0);
  op.bands[1].assign(2 * N >= 1 ? 2 * N - 1 : 0, 0.0);
  op.bands[2].assign(2 * N >= 2 ? 2 * N - 2 : 0, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    const double diag_up = (i == 0) ? 1.0 : 2.0;
    const double diag_dn = (i + 1 == N) ? 1.0 : 2.0;
    op.bands[0][2 * i] = diag_up * k + realization.values[i];
    op.bands[0][2 * i + 1] = diag_dn * k;
    if (i + 1 < N) {
      op.bands[2][2 * i] = -k;      // (n,+) ~ (n+1,+)
      op.bands[2][2 * i + 1] = -k;  // (n,-) ~ (n+1,-)
    }
  }
  return op;
}

// Restriction to a subwindow with zero boundary conditions (drops the hops
// crossing the cut; diagonal entries are untouched for the Dirac kind).
inline OperatorMatrix restrict_to(const OperatorMatrix& op, const LatticeWindow& inner) {
  if (!op.window.contains(inner)) throw std::invalid_argument("restrict_to: inner not inside window");
  Realization r;
  r.window = inner;
  r.seed = {0, 0};
  r.values.assign(op.site_values.begin() + op.window.index(inner.n_min),
                  op.site_values.begin() + op.window.index(inner.n_max) + 1);
  if (op.kind == OperatorKind::Dirac) return build_dirac(op.params, r);
  return build_schrodinger_limit(op.params.mass, r);
}

// The coupling D removes when a window Lambda is cut out of a larger window:
// D_full = D_inner (+) D_complement - F. Per boundary edge {j in Lambda,
// k = j -/+ 1 outside} the 2x2 site blocks are
//   F(j, j-1) = -[[0, c], [0, 0]],  F(j, j+1) = -[[0, 0], [c, 0]],
// together with their transposes at the mirrored positions.
struct BoundaryBlock {
  long j = 0, k = 0;       // site block position (row j, column k)
  double w[2][2] = {{0, 0}, {0, 0}};
};

struct BoundaryOperator {
  LatticeWindow outer;
  std::vector<BoundaryBlock> blocks;
  int edges = 0;
};

inline BoundaryOperator boundary_operator(const LatticeWindow& outer, const LatticeWindow& inner,
                                          double light_speed) {
  if (!outer.contains(inner)) throw std::invalid_argument("boundary_operator: inner not inside outer");
  BoundaryOperator f;
  f.outer = outer;
  const double c = light_speed;
  auto add_edge = [&](long j, long k, bool left) {
    BoundaryBlock a, b;
    a.j = j;
    a.k = k;
    if (left) a.w[0][1] = -c;   // -[[0,c],[0,0]] at (j, j-1)
    else a.w[1][0] = -c;        // -[[0,0],[c,0]] at (j, j+1)
    b.j = k;
    b.k = j;
    b.w[0][1] = a.w[1][0];
    b.w[1][0] = a.w[0][1];
    f.blocks.push_back(a);
    f.blocks.push_back(b);
    f.edges += 1;
  };
  if (inner.n_min > outer.n_min) add_edge(inner.n_min, inner.n_min - 1, true);
  if (inner.n_max < outer.n_max) add_edge(inner.n_max, inner.n_max + 1, false);
  return f;
}

// Position weights |n|^q per site. The origin gets weight 0 for q > 0; at
// q = 0 every site counts, so the zeroth moment is the squared norm and the
// Laplace-average normalization probe comes out exactly 1/2.
inline std::vector<double> position_weights(double q, const LatticeWindow& window) {
  if (!(q >= 0.0)) throw std::invalid_argument("position_weights: q must be >= 0");
  std::vector<double> w(static_cast<std::size_t>(window.sites()));
  for (long n = window.n_min; n <= window.n_max; ++n)
    w[window.index(n)] =
        (n == 0 && q > 0.0) ? 0.0 : std::pow(std::abs(static_cast<double>(n)), q);
  return w;
}

}  // namespace dirac1d

#pragma once

// Two-component Green's function columns G = (D - z)^{-1} delta_0^+ and their
// transfer-matrix consistency checks.
//
// With u(n) = (G+(n), G-(n-1)) the column satisfies the one-step recursion
// u(n+1) = T_{V(n)}(z) u(n) at every site except n = 0, where the delta
// source sits; entries of u that fall outside the window are zero.

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "banded.hpp"
#include "operator.hpp"
#include "transfer.hpp"

namespace dirac1d {

struct GreensColumn {
  cdouble z;
  LatticeWindow window;
  std::vector<cdouble> values;  // interleaved (G+(n), G-(n)) per site

  cdouble plus(long n) const { return values[2 * window.index(n)]; }
  cdouble minus(long n) const { return values[2 * window.index(n) + 1]; }
  double norm() const {
    double s = 0.0;
    for (const cdouble& v : values) s += std::norm(v);
    return std::sqrt(s);
  }
};

inline GreensColumn greens_column(const OperatorMatrix& op, cdouble z) {
  if (z.imag() == 0.0) throw std::invalid_argument("greens_column: Im z must be nonzero");
  if (!op.window.contains(0))
    throw std::invalid_argument("greens_column: window must contain the source site 0");
  const int n = static_cast<int>(op.dim());
  BandedLU<cdouble> lu(n, op.bandwidth, op.bandwidth);
  for (int j = 0; j < n; ++j) {
    const int lo = std::max(0, j - op.bandwidth), hi = std::min(n - 1, j + op.bandwidth);
    for (int i = lo; i <= hi; ++i)
      lu.at(i, j) = op.entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) -
                    (i == j ? z : cdouble(0.0));
  }
  lu.factor();

  GreensColumn g;
  g.z = z;
  g.window = op.window;
  g.values.assign(static_cast<std::size_t>(n), cdouble(0.0));
  g.values[2 * op.window.index(0)] = 1.0;
  lu.solve(g.values.data());

  // defensive contracts: defining equation and resolvent bound
  std::vector<cdouble> r(static_cast<std::size_t>(n));
  op.apply(g.values.data(), r.data());
  double rsq = 0.0;
  for (int i = 0; i < n; ++i) {
    cdouble ri = r[static_cast<std::size_t>(i)] - z * g.values[static_cast<std::size_t>(i)];
    if (i == static_cast<int>(2 * op.window.index(0))) ri -= 1.0;
    rsq += std::norm(ri);
  }
  const double gnorm = g.norm();
  if (std::sqrt(rsq) > 1e-10 * std::max(1.0, gnorm * std::abs(z)))
    throw ContractError("greens_column: solve residual out of contract");
  if (gnorm > (1.0 + 1e-9) / std::abs(z.imag()))
    throw ContractError("greens_column: resolvent bound violated");
  return g;
}

// Max over interior one-step recursion residuals, relative to the column
// norm. Both branches (sites below and above the source) are covered; a
// single-site window is vacuous by convention.
inline double greens_transfer_residual(const OperatorMatrix& op, cdouble z) {
  if (op.kind != OperatorKind::Dirac)
    throw std::invalid_argument("greens_transfer_residual: Dirac operator required");
  const GreensColumn g = greens_column(op, z);
  const LatticeWindow& w = op.window;
  if (w.sites() < 2) return 0.0;
  const double scale = g.norm();
  auto u = [&](long n) -> Mat2 {
    // pair (G+(n), G-(n-1)) packed into the first column of a Mat2
    Mat2 m{};
    m.a = g.plus(n);
    m.c = (n - 1 >= w.n_min) ? g.minus(n - 1) : cdouble(0.0);
    return m;
  };
  double worst = 0.0;
  for (long n = w.n_min; n < w.n_max; ++n) {
    if (n == 0) continue;  // delta defect row
    const Mat2 t = single_step(z, op.site_values[w.index(n)], op.params);
    const Mat2 lhs = u(n + 1), rhs = t * u(n);
    const double res = std::sqrt(std::norm(lhs.a - rhs.a) + std::norm(lhs.c - rhs.c));
    worst = std::max(worst, res);
  }
  return worst / scale;
}

}  // namespace dirac1d

#pragma once

// Interior reconstruction of finite-volume eigenfunctions from their values
// just outside a subwindow: with l1, l2 the subwindow edges,
//
//   Psi(n) = -(D^inner - E)^{-1}_{n,l1} [[0,c],[0,0]] Psi(l1 - 1)
//            -(D^inner - E)^{-1}_{n,l2} [[0,0],[c,0]] Psi(l2 + 1)
//
// for n inside. Only two resolvent columns are needed: the boundary matrices
// pick out c * Psi-(l1 - 1) against the (+, l1) column and c * Psi+(l2 + 1)
// against the (-, l2) column.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "banded.hpp"
#include "eigen.hpp"
#include "operator.hpp"

namespace dirac1d {

inline double reconstruct_eigenfunction_residual(const OperatorMatrix& big_op, double eigenvalue,
                                                 const SpinorState& eigenvector,
                                                 const LatticeWindow& inner) {
  if (!(eigenvector.window == big_op.window))
    throw std::invalid_argument("reconstruct: eigenvector window mismatch");
  if (!(big_op.window.contains(inner)) || inner.n_min - 1 < big_op.window.n_min ||
      inner.n_max + 1 > big_op.window.n_max)
    throw std::invalid_argument("reconstruct: inner window must be strictly interior");

  const OperatorMatrix sub = restrict_to(big_op, inner);
  const EigenSystem sys = eigensolve(sub);
  for (Eigen::Index j = 0; j < sys.values.size(); ++j)
    if (std::abs(sys.values(j) - eigenvalue) < 1e-8)
      throw std::invalid_argument(
          "reconstruct: eigenvalue too close to the restricted spectrum; retry with another window");

  const int dim = static_cast<int>(sub.dim());
  BandedLU<double> lu(dim, sub.bandwidth, sub.bandwidth);
  for (int j = 0; j < dim; ++j) {
    const int lo = std::max(0, j - sub.bandwidth), hi = std::min(dim - 1, j + sub.bandwidth);
    for (int i = lo; i <= hi; ++i)
      lu.at(i, j) = sub.entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) -
                    (i == j ? eigenvalue : 0.0);
  }
  lu.factor();

  std::vector<double> col_left(static_cast<std::size_t>(dim), 0.0);
  std::vector<double> col_right(static_cast<std::size_t>(dim), 0.0);
  col_left[2 * inner.index(inner.n_min)] = 1.0;       // (+, l1)
  col_right[2 * inner.index(inner.n_max) + 1] = 1.0;  // (-, l2)
  lu.solve(col_left);
  lu.solve(col_right);

  const double c = big_op.params.light_speed;
  const cdouble wl = c * eigenvector.minus(inner.n_min - 1);
  const cdouble wr = c * eigenvector.plus(inner.n_max + 1);

  const long n = inner.n_min + inner.sites() / 2;  // window center
  const std::size_t ip = 2 * inner.index(n), im = ip + 1;
  const cdouble rec_plus = -(col_left[ip] * wl + col_right[ip] * wr);
  const cdouble rec_minus = -(col_left[im] * wl + col_right[im] * wr);

  const cdouble psi_plus = eigenvector.plus(n), psi_minus = eigenvector.minus(n);
  const double scale = std::sqrt(std::norm(psi_plus) + std::norm(psi_minus));
  if (scale == 0.0) throw std::invalid_argument("reconstruct: eigenvector vanishes at the window center");
  return std::sqrt(std::norm(rec_plus - psi_plus) + std::norm(rec_minus - psi_minus)) / scale;
}

}  // namespace dirac1d

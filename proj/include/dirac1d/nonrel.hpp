#pragma once

// Operator-norm distance between the mass-shifted Dirac resolvent and the
// projected resolvent of its nonrelativistic limit on a common window:
//   error(c) = || (D(c) - m c^2 - z)^{-1} - Lambda (H_inf - z)^{-1} ||_2
// with Lambda = diag(1, 0) per site. The limit operator H_inf is the
// truncated-hopping square built by build_schrodinger_limit, so the identity
// D(c)^2 = c^2 B^2 + (m c^2)^2 survives the finite window exactly and the
// error decays like 1/c.

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#include "eigen.hpp"
#include "operator.hpp"

namespace dirac1d {

inline double nonrel_limit_error(double c, double m, cdouble z, const Realization& realization) {
  if (!(m > 0.0)) throw std::invalid_argument("nonrel_limit_error: mass must be > 0");
  if (z.imag() == 0.0) throw std::invalid_argument("nonrel_limit_error: Im z must be nonzero");
  const DiracParams par(m, c);
  const OperatorMatrix dirac = build_dirac(par, realization);
  const OperatorMatrix schro = build_schrodinger_limit(m, realization);
  const auto n = static_cast<Eigen::Index>(dirac.dim());

  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd rd =
      (to_dense(dirac).cast<cdouble>() - (par.mc2() + z) * id).inverse();
  Eigen::MatrixXcd rs = (to_dense(schro).cast<cdouble>() - z * id).inverse();
  for (Eigen::Index i = 1; i < n; i += 2) rs.row(i).setZero();  // Lambda projection

  return Eigen::JacobiSVD<Eigen::MatrixXcd>(rd - rs).singularValues()(0);
}

}  // namespace dirac1d
